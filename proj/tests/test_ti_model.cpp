#include <algorithm>

#include "doctest.h"
#include "tisim/ti_model.hpp"

using namespace tisim;

namespace {
Energies numeric(const TIParams& p, const Momentum& k) { return eigenvalues_sorted(build_h_ti(p, k)); }
void check_energies(const Energies& e, std::array<double, 4> want, double tol) {
  for (int i = 0; i < 4; ++i) CHECK(std::abs(e[i] - want[i]) < tol);
}
}  // namespace

TEST_CASE("hamiltonian examples") {
  const cmat h = build_h_ti({1, 1, 0}, {0, 0});
  CHECK(max_abs(h - kron(pauli::I(), pauli::X())) == 0.0);
  check_energies(numeric({1, 1, 0}, {0, 0}), {-1, -1, 1, 1}, 1e-14);
  check_energies(numeric({1, 1, 1}, {0, 0}), {-2, 0, 0, 2}, 1e-14);
  CHECK(is_hermitian(build_h_ti({0.3, 1.7, 0.9}, {0.4, -1.2})));

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 20; ++i) {
    const TIParams p{std::abs(u(rng)) + 0.1, std::abs(u(rng)) + 0.1, std::abs(u(rng))};
    const Momentum k{u(rng), u(rng)};
    const cmat H = build_h_ti(p, k);
    const double tr = (H * H).trace().real();
    CHECK(tr == doctest::Approx(4 * (p.A * p.A * (k.kx * k.kx + k.ky * k.ky) + p.eps_b * p.eps_b +
                                     p.delta * p.delta)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(build_h_ti({-1, 1, 0}, {0, 0}).trace(), InputError);
}

TEST_CASE("particle-hole symmetry") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const TIParams p{std::abs(u(rng)) + 0.05, std::abs(u(rng)) + 0.05, std::abs(u(rng))};
    const auto e = numeric(p, {u(rng), u(rng)});
    for (int m = 0; m < 4; ++m) CHECK(std::abs(e[m] + e[3 - m]) < 1e-10);
  }
}

TEST_CASE("closed-form spectrum") {
  check_energies(spectrum_exact({1, 1, 1}, {0, 0}).E, {-2, 0, 0, 2}, 1e-14);
  const double kc = std::sqrt(1.43 * 1.43 - 1.0);
  const auto e = spectrum_exact({1, 1, 1.43}, {0, kc}).E;
  CHECK(std::abs(e[1]) < 1e-12);
  CHECK(std::abs(e[2]) < 1e-12);
  for (double ky : {-1.5, 0.0, 0.8}) {
    const auto z = spectrum_exact({1, 1, 0}, {0, ky}).E;
    const double r = std::sqrt(ky * ky + 1);
    check_energies(z, {-r, -r, r, r}, 1e-13);
  }
  CHECK_FALSE(spectrum_exact({1, 1, 0.5}, {0, 0.3}).numeric);
  CHECK(spectrum_exact({1, 1, 0.5}, {0.2, 0.3}).numeric);
}

TEST_CASE("band scan") {
  const auto t = band_scan({1, 1, 0.57}, 0, -2, 2, 101);
  REQUIRE(t.ky.size() == 101);
  double gmin = 1e9;
  for (size_t i = 0; i < t.ky.size(); ++i) {
    if (i) CHECK(t.ky[i] > t.ky[i - 1]);
    CHECK(std::is_sorted(t.E[i].begin(), t.E[i].end()));
    for (int m = 0; m < 4; ++m) CHECK(std::abs(t.E[i][m] + t.E[i][3 - m]) < 1e-10);
    gmin = std::min(gmin, t.E[i][2] - t.E[i][1]);
  }
  CHECK(gmin == doctest::Approx(2 * (1 - 0.57)).epsilon(1e-12));

  const auto s = band_scan({1, 1, 1.43}, 0, -2, 2, 101);
  int dips = 0;
  for (size_t i = 1; i + 1 < s.ky.size(); ++i) {
    const double g = s.E[i][2] - s.E[i][1];
    if (g < s.E[i - 1][2] - s.E[i - 1][1] && g < s.E[i + 1][2] - s.E[i + 1][1]) ++dips;
  }
  CHECK(dips == 2);
  const auto csv = t.to_csv();
  CHECK(csv.rfind("ky,E1,E2,E3,E4\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 102);
  CHECK_THROWS_WITH_AS(band_scan({1, 1, 0}, 0, -2, 2, 1), "steps >= 2 required", InputError);
  CHECK_THROWS_AS(band_scan({1, 1, 0}, 0, 2, 2, 10), InputError);
}

TEST_CASE("dirac points and phase") {
  CHECK(dirac_points({1, 1, 0.57}).empty());
  const auto c = dirac_points({1, 1, 1});
  REQUIRE(c.size() == 1);
  CHECK(std::abs(c[0]) < 1e-9);
  const auto d = dirac_points({1, 1, 1.43});
  REQUIRE(d.size() == 2);
  CHECK(d[0] == doctest::Approx(-1.0219).epsilon(1e-3));
  CHECK(d[1] == doctest::Approx(1.0219).epsilon(1e-3));
  CHECK(d[1] == doctest::Approx(std::sqrt(1.43 * 1.43 - 1)).epsilon(1e-9));
  // scale with A
  const auto a = dirac_points({2, 1, 1.43});
  CHECK(a[1] == doctest::Approx(std::sqrt(1.43 * 1.43 - 1) / 2).epsilon(1e-9));

  for (int i = 0; i <= 40; ++i) {
    const double s = 0.05 * i;
    if (std::abs(s - 1) < 1e-3) continue;
    CHECK(dirac_points({1, 1, s}).size() == (s < 1 ? 0u : 2u));
  }
}

TEST_CASE("minimal gap") {
  auto g = minimal_gap({1, 1, 0});
  CHECK(g.gap == doctest::Approx(2.0));
  CHECK(g.phase == Phase::Insulating);
  g = minimal_gap({1, 1, 1});
  CHECK(g.gap < 1e-12);
  CHECK(g.phase == Phase::Critical);
  CHECK(minimal_gap({1, 1, 1.43}).phase == Phase::Semimetallic);
  for (int i = 0; i <= 40; ++i) {
    const double eb = 0.05 * i;
    const double gap = minimal_gap({1, 1, eb}).gap;
    CHECK(std::abs(gap - 2 * std::max(0.0, 1 - eb)) < 1e-8);
    if (eb <= 1) CHECK(std::abs(gap / 2 + eb - 1) < 1e-8);
  }
  CHECK(to_string(Phase::Semimetallic) == "semimetallic");
}

TEST_CASE("winding") {
  const TIParams p{1, 1, 1.43};
  const double kc = std::sqrt(1.43 * 1.43 - 1);
  CHECK(winding_number(p, circle_loop(0, 0, 0.3, 200)).winding == 0);
  const auto up = winding_number(p, circle_loop(0, kc, 0.2, 200));
  const auto dn = winding_number(p, circle_loop(0, -kc, 0.2, 200));
  CHECK(up.winding == 1);
  CHECK(dn.winding == 1);
  CHECK(std::abs(std::abs(up.berry_phase) - kPi) < 1e-9);
  CHECK(up.residue < 1e-6);
  // the two cones carry opposite signed Berry phase; the Z2 windings add to 0 mod 2
  CHECK(std::abs(std::remainder(up.berry_phase + dn.berry_phase, kTwoPi)) < 1e-9);
  CHECK((up.winding + dn.winding) % 2 == 0);
  CHECK(winding_number(p, circle_loop(0, 0, 1.5, 400)).winding == 0);
  // the lowest band stays gapped from its neighbour there
  CHECK(winding_number(p, circle_loop(0, kc, 0.2, 200), 0).winding == 0);

  // a loop through the exact Dirac point is rejected
  CHECK_THROWS_AS(winding_number(p, circle_loop(0.3, kc, 0.3, 200)), InputError);
  CHECK_THROWS_AS(winding_number(p, circle_loop(0, 0, 0.3, 2)), InputError);
  CHECK_THROWS_AS(winding_number(p, circle_loop(0, 0, 0.3, 20), 2), InputError);
}

TEST_CASE("magnetic energy adapter") {
  CHECK(magnetic_length_nm(1.0) == doctest::Approx(25.6556).epsilon(2e-6));
  PhysicalFieldParams f;
  f.v_f = 5e5;
  f.m = 0.1;
  f.d = zeeman_length_nm(f.m, f.v_f);
  for (double b : {0.5, 1.0, 3.0}) {
    f.b_field = b;
    CHECK(std::abs(magnetic_energy(f).eps_b) < 1e-12);
  }
  PhysicalFieldParams g;
  g.zeeman = false;
  g.d = 10;
  g.b_field = 1;
  const double e1 = magnetic_energy(g).eps_b;
  g.b_field = 2;
  CHECK(magnetic_energy(g).eps_b == doctest::Approx(2 * e1).epsilon(1e-12));
  // v_F d e B / (2 hbar) with hbar/e = 6.582119569e-16 T m^2
  CHECK(e1 == doctest::Approx(5e5 * 10 * 1.0 / (2 * 6.582119569e-16 * 1e18)).epsilon(1e-12));
  f.d = 0.5 * f.d;
  f.b_field = 1;
  CHECK(magnetic_energy(f).negative);
  g.b_field = 0;
  CHECK_THROWS_AS(magnetic_energy(g), InputError);
  g.b_field = -1;
  CHECK_THROWS_AS(magnetic_energy(g), InputError);
}
