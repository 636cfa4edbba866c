#include "tisim/ti_model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tisim {

namespace {
constexpr double kHbarOverE = 6.582119569e-16;      // T m^2
constexpr double kHbarOverMe = 1.15767636e8;        // nm^2/us
constexpr double kDiracRelTol = 1e-9;

double kink_gap(const TIParams& p, double ky) {
  const auto e = eigenvalues_sorted(build_h_ti(p, {0.0, ky}));
  return e[2] - e[1];
}

double golden_min(const TIParams& p, double a, double b) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = kink_gap(p, c), fd = kink_gap(p, d);
  for (int it = 0; it < 200 && b - a > 1e-13 * (1.0 + std::abs(a)); ++it) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - r * (b - a), fc = kink_gap(p, c);
    } else {
      a = c, c = d, fc = fd;
      d = a + r * (b - a), fd = kink_gap(p, d);
    }
  }
  return 0.5 * (a + b);
}
}  // namespace

void TIParams::validate() const {
  if (!(A > 0)) throw InputError("A must be > 0");
  if (!(delta > 0)) throw InputError("delta must be > 0");
  if (!(eps_b >= 0)) throw InputError("eps_b must be >= 0");
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::Insulating: return "insulating";
    case Phase::Critical: return "critical";
    case Phase::Semimetallic: return "semimetallic";
  }
  return "?";
}

cmat build_h_ti(const TIParams& p, const Momentum& k) {
  p.validate();
  using namespace pauli;
  return p.A * kron(k.ky * X() - k.kx * Y(), Z()) - p.eps_b * kron(X(), I()) +
         p.delta * kron(I(), X());
}

Energies eigenvalues_sorted(const cmat& h) {
  Eigen::SelfAdjointEigenSolver<cmat> es(h, Eigen::EigenvaluesOnly);
  Energies e{};
  for (int i = 0; i < 4; ++i) e[i] = es.eigenvalues()(i);
  return e;
}

SpectrumResult spectrum_exact(const TIParams& p, const Momentum& k) {
  p.validate();
  SpectrumResult r;
  if (k.kx != 0.0) {
    r.E = eigenvalues_sorted(build_h_ti(p, k));
    r.numeric = true;
    return r;
  }
  const double w = std::hypot(p.A * k.ky, p.delta);
  r.E = {-w - p.eps_b, -w + p.eps_b, w - p.eps_b, w + p.eps_b};
  std::sort(r.E.begin(), r.E.end());
  return r;
}

BandTable band_scan(const TIParams& p, double kx, double ky_min, double ky_max, int steps) {
  p.validate();
  if (steps < 2) throw InputError("steps >= 2 required");
  if (!(ky_max > ky_min)) throw InputError("ky range is empty");
  BandTable t;
  t.kx = kx;
  for (int i = 0; i < steps; ++i) {
    const double ky = ky_min + (ky_max - ky_min) * i / (steps - 1);
    t.ky.push_back(ky);
    t.E.push_back(spectrum_exact(p, {kx, ky}).E);
  }
  return t;
}

std::string BandTable::to_csv() const {
  std::ostringstream os;
  os << "ky,E1,E2,E3,E4\n";
  char buf[64];
  for (size_t i = 0; i < ky.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", ky[i]);
    os << buf;
    for (double e : E[i]) {
      std::snprintf(buf, sizeof buf, ",%.12g", e);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

std::vector<double> dirac_points(const TIParams& p) {
  p.validate();
  const double rel = (p.eps_b - p.delta) / p.delta;
  if (rel < -kDiracRelTol) return {};
  std::vector<double> guess;
  if (rel <= kDiracRelTol)
    guess = {0.0};
  else {
    const double k0 = std::sqrt(p.eps_b * p.eps_b - p.delta * p.delta) / p.A;
    guess = {-k0, k0};
  }
  std::vector<double> out;
  for (double g : guess) {
    const double half = 0.2 * (g == 0.0 ? p.delta / p.A : std::abs(g));
    const double k = golden_min(p, g - half, g + half);
    if (kink_gap(p, k) > 1e-8)
      throw ContractError("dirac_points: numeric gap minimum did not confirm the closed form");
    out.push_back(g);
  }
  return out;
}

GapResult minimal_gap(const TIParams& p) {
  p.validate();
  GapResult r;
  const double ky = p.eps_b > p.delta ? std::sqrt(p.eps_b * p.eps_b - p.delta * p.delta) / p.A : 0.0;
  const auto e = spectrum_exact(p, {0.0, ky}).E;
  r.gap = std::max(0.0, e[2] - e[1]);
  const double tol = 1e-6 * p.delta;
  if (r.gap > tol)
    r.phase = Phase::Insulating;
  else if (p.eps_b > p.delta + tol)
    r.phase = Phase::Semimetallic;
  else
    r.phase = Phase::Critical;
  return r;
}

Loop circle_loop(double kx0, double ky0, double radius, int points) {
  if (points < 3) throw InputError("a loop needs at least 3 points");
  Loop l;
  for (int i = 0; i < points; ++i) {
    const double a = kTwoPi * i / points;
    l.emplace_back(kx0 + radius * std::cos(a), ky0 + radius * std::sin(a));
  }
  return l;
}

WindingResult winding_number(const TIParams& p, const Loop& loop, int band) {
  p.validate();
  if (band < 0 || band > 1) throw InputError("band must index the lower pair (0 or 1)");
  if (loop.size() < 3) throw InputError("loop needs at least 3 points");
  std::vector<cvec> u;
  for (const auto& [kx, ky] : loop) {
    Eigen::SelfAdjointEigenSolver<cmat> es(build_h_ti(p, {kx, ky}));
    const auto& ev = es.eigenvalues();
    double sep = ev(band + 1) - ev(band);
    if (band > 0) sep = std::min(sep, ev(band) - ev(band - 1));
    if (sep < 1e-6 * p.delta)
      throw InputError("winding_number: loop passes through a band degeneracy");
    u.push_back(es.eigenvectors().col(band));
  }
  cplx prod = 1.0;
  for (size_t i = 0; i < u.size(); ++i) {
    prod *= u[i].dot(u[(i + 1) % u.size()]);
    prod /= std::abs(prod);
  }
  WindingResult r;
  r.berry_phase = -std::arg(prod);
  const double x = std::abs(r.berry_phase) / kPi;
  r.winding = static_cast<int>(std::lround(x));
  r.residue = std::abs(x - r.winding);
  if (r.residue > 0.05)
    throw ContractError("winding_number: quantization residue " + std::to_string(r.residue) +
                        " above 0.05, use a finer loop discretization");
  return r;
}

double magnetic_length_nm(double b) {
  if (!(b > 0)) throw InputError("magnetic field must be > 0");
  return std::sqrt(kHbarOverE / b) * 1e9;
}

double zeeman_length_nm(double m, double v_f) {
  if (!(m > 0) || !(v_f > 0)) throw InputError("mass and Fermi velocity must be > 0");
  return kHbarOverMe / (m * v_f);
}

MagneticEnergy magnetic_energy(const PhysicalFieldParams& f) {
  if (!(f.b_field > 0)) throw InputError("b_field must be > 0");
  if (!(f.d > 0)) throw InputError("film thickness d must be > 0");
  if (!(f.v_f > 0)) throw InputError("v_f must be > 0");
  MagneticEnergy r;
  r.l_nm = magnetic_length_nm(f.b_field);
  const double l2 = r.l_nm * r.l_nm;
  r.q_b = f.d / (2 * l2);
  if (f.zeeman) r.q_b -= zeeman_length_nm(f.m, f.v_f) / (2 * l2);
  const double e = f.v_f * r.q_b;
  r.negative = e < 0;
  r.eps_b = std::abs(e);
  return r;
}

}  // namespace tisim
