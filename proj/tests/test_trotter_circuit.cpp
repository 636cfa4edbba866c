#include "doctest.h"
#include "tisim/trotter_circuit.hpp"

using namespace tisim;

namespace {
const cmat X = pauli::X(), Y = pauli::Y(), Z = pauli::Z(), I = pauli::I();
cmat rot(const cmat& P, double a) { return std::cos(a) * cmat::Identity(P.rows(), P.cols()) + kI * std::sin(a) * P; }
}  // namespace

TEST_CASE("conjugation to the simulator frame") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 100; ++i) {
    const TIParams p{std::abs(u(rng)) + 0.1, std::abs(u(rng)) + 0.1, std::abs(u(rng))};
    const Momentum k{u(rng), u(rng)};
    const auto hs = build_hs(p, k);
    CHECK(max_abs(hs.u1.adjoint() * build_h_ti(p, k) * hs.u1 - hs.hs) <= 1e-12);
    const auto a = eigenvalues_sorted(hs.hs), b = eigenvalues_sorted(build_h_ti(p, k));
    for (int m = 0; m < 4; ++m) CHECK(std::abs(a[m] - b[m]) < 1e-10);
  }
  const auto z = build_hs({1, 0.7, 0}, {0, 0});
  CHECK(max_abs(z.hs - 0.7 * kron(Z, Z)) == 0.0);
  // U1 as a product of its two commuting factors
  CHECK(max_abs(u1_matrix() - rot(kron(Z, Z), kPi / 4) * rot(kron(I, X), kPi / 4)) < 1e-14);
  CHECK(is_unitary(u1_matrix()));
}

TEST_CASE("U2 maps sigma_z tau_z to sigma_y tau_y") {
  const cmat u2 = u2_matrix();
  for (double th = -3; th <= 3; th += 0.25)
    CHECK(max_abs(u2 * rot(kron(Z, Z), -th) * u2.adjoint() - rot(kron(Y, Y), -th)) < 1e-12);
}

TEST_CASE("trotter product") {
  const TIParams p{1, 1, 0.8};
  const Momentum k{0.4, -0.9};
  const auto exact = exact_hs_unitary(p, k, 1.0);
  // first-order bound t^2 ||[H1, H2]|| / (2n)
  const cmat h1 = p.eps_b * kron(Y, Y), h2 = h2_matrix(p, k);
  const double bound = spectral_norm(h1 * h2 - h2 * h1) / (2 * 512);
  CHECK(phase_distance(trotter_unitary(make_plan(p, 1.0, 512), p, k), exact) <= bound);
  const TIParams soft{1, 1, 0.57};
  const Momentum ks{0, 0.3};
  CHECK(phase_distance(trotter_unitary(make_plan(soft, 1.0, 512), soft, ks), exact_hs_unitary(soft, ks, 1.0)) <= 1e-4);

  // commuting case: eps_b = 0 removes H1
  const TIParams q{1, 1, 0};
  for (int n : {1, 3}) CHECK(phase_distance(trotter_unitary(make_plan(q, 2.0, n), q, k), exact_hs_unitary(q, k, 2.0)) < 1e-12);
  CHECK(phase_distance(trotter_unitary(make_plan(p, 0.0, 4), p, k), cmat::Identity(4, 4)) < 1e-14);

  std::vector<int> ns{2, 4, 8, 16, 32};
  std::vector<double> err;
  for (int n : ns) err.push_back(phase_distance(trotter_unitary(make_plan(p, 1.0, n), p, k), exact));
  const double e = fit_exponent(ns, err);
  CHECK(e >= 0.8);
  CHECK(e <= 1.2);

  auto bad = make_plan(p, 1.0, 2);
  bad.n = 0;
  CHECK_THROWS_AS(trotter_unitary(bad, p, k), InputError);
  CHECK_THROWS_AS(make_plan(p, -1.0, 2), InputError);
}

TEST_CASE("fidelity anchor") {
  const auto st = fidelity_sweep(FidelityGrid{}, 2, 1);
  CHECK(st.min_fidelity >= 0.80);
  CHECK(st.min_fidelity <= 0.95);
  CHECK(st.mean_fidelity > st.min_fidelity);
  CHECK(st.max_error == doctest::Approx(std::sqrt(1 - st.min_fidelity)));
  CHECK(fit_exponent({1, 10}, {1.0, 0.1}) == doctest::Approx(1.0));
}

TEST_CASE("drive mapping") {
  const double ge = NVParams{}.gamma_e;
  const auto z = drive_mapping(1.0, 0, 0, ge);
  CHECK(z.b1 == 0.0);
  const auto a = drive_mapping(1.3, 0.7, 0, ge);
  CHECK(a.phi == 0.0);
  CHECK(a.b1 == doctest::Approx(4 * 1.3 * 0.7 / ge));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const double kx = u(rng), ky = u(rng);
    const auto m = drive_unmapping(drive_mapping(0.9, kx, ky, ge), 0.9, ge);
    CHECK(std::abs(m.kx - kx) <= 1e-12);
    CHECK(std::abs(m.ky - ky) <= 1e-12);
  }
}

TEST_CASE("compiled controlled-U") {
  const TIParams p{1, 1, 0.57};
  const Momentum k{0.2, 0.6};
  const auto c0 = compile_controlled_u(make_plan(p, 0.0, 2), p, k);
  CHECK(phase_distance(c0.unitary, cmat::Identity(8, 8)) < 1e-12);

  // eigenstate through the circuit picks up e^{-i E t} on the N = 1 branch
  Eigen::SelfAdjointEigenSolver<cmat> es(build_h_ti(p, k));
  cvec plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const double t = 1.3;
  auto plan = make_plan(p, t, 2);
  plan.exact_u = true;
  const auto ce = compile_controlled_u(plan, p, k);
  const auto ct = compile_controlled_u(make_plan(p, t, 64), p, k);
  for (int m = 0; m < 4; ++m) {
    const cvec phi = es.eigenvectors().col(m);
    const double E = es.eigenvalues()(m);
    for (const auto* c : {&ce, &ct}) {
      const cvec out = c->unitary * kron(phi, plus);
      cvec want = kron(phi, (cvec(2) << 1, std::exp(-kI * (E * t))).finished() / std::sqrt(2.0));
      CHECK(fidelity(out, want) > (c == &ce ? 1 - 1e-12 : 0.999));
    }
  }
  CHECK(ce.gates.size() == 1);
  CHECK(ct.gates.size() == 2 + 4 * 64);
  CHECK(ct.gates_json()[0]["name"] == "U1_inv");
  CHECK(ct.block0_error <= 1e-9);
}

TEST_CASE("s sweep only stretches the H1 free evolutions") {
  const NVParams nv;
  const Momentum k{0.1, -0.4};
  const double s = 1.43;
  const auto a = controlled_u_schedule(make_plan({1, 1, s}, 0.8, 2), {1, 1, s}, k, nv);
  const auto b = controlled_u_schedule(make_plan({1, 1, 1}, 0.8, 2), {1, 1, 1}, k, nv);
  REQUIRE(a.elements.size() == b.elements.size());
  int stretched = 0;
  for (size_t i = 0; i < a.elements.size(); ++i) {
    const auto &x = a.elements[i], &y = b.elements[i];
    CHECK(x.kind == y.kind);
    if (x.duration_us == y.duration_us) continue;
    CHECK(x.kind == PulseKind::FreeEvolution);
    CHECK(x.duration_us == doctest::Approx(s * y.duration_us).epsilon(1e-15));
    ++stretched;
  }
  CHECK(stretched == 4);
}

TEST_CASE("pulse tier reproduces the gate tier") {
  const NVParams nv;
  const PulseEngine eng(nv);
  const cmat P = qubit_embedding(nv).P;
  const TIParams p{1, 1, 1.43};
  const Momentum k{-0.5, 0.8};
  const auto c = compile_controlled_u(make_plan(p, 1.0, 2, Tier::Pulse), p, k, nv);
  const cmat u = schedule_propagator(c.schedule, eng, Tier::Pulse);
  CHECK(phase_distance(P.adjoint() * u * P, c.unitary) <= 5e-2);
  CHECK(leakage(u) <= 0.01);
  // gate-tier element product equals the compiled unitary
  CHECK(phase_distance(schedule_propagator(c.schedule, eng, Tier::Gate), c.unitary) <= 1e-2);
}

TEST_CASE("timing of the full run") {
  const TIParams p{1, 1, 0.57};
  const auto s = full_run_schedule(make_plan(p, 1.0, 2, Tier::Pulse), p, {0, 0.5}, NVParams{});
  const auto t = schedule_timing(s);
  CHECK(t.total_us >= 76);
  CHECK(t.total_us <= 114);
  CHECK(t.rf_us == doctest::Approx(88).epsilon(0.2));
  CHECK(t.mw_us == doctest::Approx(3).epsilon(0.5));
  CHECK(v0_duration(NVParams{}) == doctest::Approx(5.0 / 7.0).epsilon(1e-12));
  CHECK(physical_scale(p, NVParams{}) == doctest::Approx(kTwoPi * 3.5));
}
