import json
import math

import numpy as np
import pytest

import tisim


def test_hamiltonian_and_spectrum():
    h = tisim.h_ti(1.0, 1.0, 0.57, 0.3, -0.4)
    assert h.shape == (4, 4)
    assert np.allclose(h, h.conj().T)
    e = tisim.spectrum(1.0, 1.0, 1.0)
    assert np.allclose(e, [-2, 0, 0, 2], atol=1e-12)
    assert np.allclose(np.linalg.eigvalsh(tisim.h_ti(1, 1, 0.4, 0.0, 0.7)), tisim.spectrum(1, 1, 0.4, 0.0, 0.7))


def test_phase_diagram():
    assert tisim.dirac_points(1, 1, 0.57) == []
    d = tisim.dirac_points(1, 1, 1.43)
    assert len(d) == 2 and abs(d[1] - math.sqrt(1.43**2 - 1)) < 1e-9
    gap, phase = tisim.minimal_gap(1, 1, 0.57)
    assert phase == "insulating" and abs(gap - 0.86) < 1e-12
    ky, e = tisim.bands(eps_b=1.43, steps=41)
    assert len(ky) == 41 and e.shape == (41, 4)
    w = tisim.winding(1, 1, 1.43, 0.0, d[1])
    assert w["winding"] == 1


def test_circuit_and_signal():
    u = tisim.controlled_u(1, 1, 0.57, 0.2, 0.5, 1.0, n=4)
    assert np.allclose(u.conj().T @ u, np.eye(8), atol=1e-9)
    t, g, se = tisim.signal(1, 1, 0.57, 0.0, 0.5, index=3, exact_u=True, M=128)
    peaks = json.loads(tisim.extract(g, t[1] - t[0]))
    e3 = tisim.spectrum(1, 1, 0.57, 0.0, 0.5)[3]
    assert abs(peaks["energies_rad_per_us"][0] - e3) <= 0.5 * peaks["resolution"]


def test_reports_and_errors():
    fmin, fmean = tisim.fidelity(2)
    assert 0.80 <= fmin <= 0.95
    assert 76 <= tisim.timing()["total_us"] <= 114
    with pytest.raises(ValueError):
        tisim.bands(steps=1)
    code, _, err = tisim.cli(["bands", "--steps", "1"])
    assert code == 2 and "steps >= 2" in err
