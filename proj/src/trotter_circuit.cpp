#include "tisim/trotter_circuit.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "tisim/parallel.hpp"

namespace tisim {

namespace {
using namespace pauli;

cmat sig(const cmat& a) { return kron(a, I()); }
cmat tau(const cmat& a) { return kron(I(), a); }

cmat controlled(const cmat& g4) {
  cmat p0 = cmat::Zero(2, 2), p1 = cmat::Zero(2, 2);
  p0(0, 0) = 1, p1(1, 1) = 1;
  return kron(g4, p1) + kron(I(4), p0);
}
}  // namespace

void TrotterPlan::validate() const {
  if (n < 1) throw InputError("n >= 1 required");
  if (!(t >= 0)) throw InputError("t >= 0 required");
  if (!(s >= 0)) throw InputError("s >= 0 required");
}

TrotterPlan make_plan(const TIParams& p, double t, int n, Tier tier) {
  p.validate();
  TrotterPlan pl;
  pl.t = t;
  pl.n = n;
  pl.s = p.eps_b / p.delta;
  pl.tier = tier;
  pl.validate();
  return pl;
}

cmat u1_matrix() {
  return expm_herm(kron(Z(), Z()), -kPi / 4) * expm_herm(tau(X()), -kPi / 4);
}

cmat u2_matrix() {
  return expm_herm(tau(X()), -kPi / 4) * expm_herm(sig(X()), -kPi / 4);
}

HsPair build_hs(const TIParams& p, const Momentum& k) {
  p.validate();
  HsPair r;
  r.u1 = u1_matrix();
  r.hs = p.A * k.ky * sig(Y()) + p.A * k.kx * sig(X()) + p.delta * kron(Z(), Z()) +
         p.eps_b * kron(Y(), Y());
  const cmat conj = r.u1.adjoint() * build_h_ti(p, k) * r.u1;
  if (max_abs(conj - r.hs) > kHermTol)
    throw ContractError("build_hs: U1 conjugation identity violated (convention bug)");
  return r;
}

cmat h2_matrix(const TIParams& p, const Momentum& k) {
  return p.A * k.ky * sig(Y()) + p.A * k.kx * sig(X()) + p.delta * kron(Z(), Z());
}

cmat exact_hs_unitary(const TIParams& p, const Momentum& k, double t) {
  return expm_herm(build_hs(p, k).hs, t);
}

namespace {
void check_s(const TrotterPlan& plan, const TIParams& p) {
  if (std::abs(plan.s * p.delta - p.eps_b) > 1e-12 * std::max(1.0, p.eps_b))
    throw InputError("plan s does not match eps_b / delta");
}
}  // namespace

cmat trotter_unitary(const TrotterPlan& plan, const TIParams& p, const Momentum& k) {
  plan.validate();
  p.validate();
  check_s(plan, p);
  const double tau_ = plan.t / plan.n;
  const cmat u2 = u2_matrix();
  const cmat h1 = u2 * expm_herm(p.delta * kron(Z(), Z()), plan.s * tau_) * u2.adjoint();
  const cmat step = h1 * expm_herm(h2_matrix(p, k), tau_);
  cmat u = cmat::Identity(4, 4);
  for (int i = 0; i < plan.n; ++i) u = step * u;
  return u;
}

Drive drive_mapping(double A, double kx, double ky, double gamma_e) {
  Drive d;
  const double k = std::hypot(kx, ky);
  if (k == 0.0) return d;
  d.b1 = 4 * A * k / gamma_e;
  d.phi = std::atan2(ky, kx);
  return d;
}

Momentum drive_unmapping(const Drive& d, double A, double gamma_e) {
  const double ak = gamma_e * d.b1 / 4;
  return {ak * std::cos(d.phi) / A, ak * std::sin(d.phi) / A};
}

nlohmann::json CompiledCircuit::gates_json() const {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& g : gates) a.push_back({{"name", g.name}, {"params", g.params}, {"subspace", g.subspace}});
  return a;
}

double physical_scale(const TIParams& p, const NVParams& nv) { return nv.delta_eff() / p.delta; }

double v0_duration(const NVParams& nv) {
  // N=0 block needs an odd multiple of pi/2 of sigma_z precession at J_N/2, while the
  // sigma_z tau_z coupling must come back to +-1 in both blocks
  for (int m = 0; m < 64; ++m) {
    const double T = (2 * m + 1) * kPi / nv.J_N;
    const double x = nv.delta_eff() * T / kPi;
    if (std::abs(x - std::round(x)) < 1e-9) return T;
  }
  throw InputError("no refocusing window: J_C/4 and J_N are not commensurate enough");
}

namespace {
void rf_c(PulseSchedule& s, double th, const NVParams& nv) {
  s.append(rf_rotation(PulseKind::RF_C, th, 0.0, nv));
}
// echo that keeps the N=0 block still while the N=1 block evolves
void v0(PulseSchedule& s, double perp, const NVParams& nv) {
  s.push(hard_rotation(kPi / 2, perp + kPi / 2, nv));
  s.push(free_evolution(v0_duration(nv)));
  s.push(hard_rotation(-kPi / 2, perp + kPi / 2, nv));
}
double zz_quarter(const NVParams& nv) { return kPi / (4 * nv.delta_eff()); }
}  // namespace

PulseSchedule cu_prefix_schedule(const NVParams& nv) {
  PulseSchedule s;
  s.push(free_evolution(zz_quarter(nv)));
  rf_c(s, kPi / 2, nv);
  return s;
}

PulseSchedule cu_slice_schedule(double tau_phys, double rabi, double phi, double s_ratio,
                                const NVParams& nv) {
  PulseSchedule s;
  s.push(mw_drive(rabi, phi, tau_phys / 2, nv));
  v0(s, phi + kPi / 2, nv);
  s.push(mw_drive(rabi, phi, tau_phys / 2, nv));
  v0(s, phi + kPi / 2, nv);

  s.push(hard_rotation(kPi / 2, 0.0, nv));
  rf_c(s, kPi / 2, nv);
  s.push(free_evolution(s_ratio * tau_phys / 2));
  v0(s, 0.0, nv);
  s.push(free_evolution(s_ratio * tau_phys / 2));
  v0(s, 0.0, nv);
  s.push(hard_rotation(-kPi / 2, 0.0, nv));
  rf_c(s, -kPi / 2, nv);
  return s;
}

PulseSchedule cu_suffix_schedule(const NVParams& nv) {
  PulseSchedule s;
  rf_c(s, -kPi / 2, nv);
  s.push(electron_flip(0.0, nv));
  s.push(free_evolution(zz_quarter(nv)));
  s.push(electron_flip(0.0, nv));
  return s;
}

SliceDrive slice_drive(const TrotterPlan& plan, const TIParams& p, const Momentum& k,
                       const NVParams& nv) {
  const double lam = physical_scale(p, nv);
  return {plan.t / plan.n / lam, lam * p.A * std::hypot(k.kx, k.ky), std::atan2(k.ky, k.kx)};
}

PulseSchedule controlled_u_schedule(const TrotterPlan& plan, const TIParams& p, const Momentum& k,
                                    const NVParams& nv) {
  plan.validate();
  p.validate();
  check_s(plan, p);
  const auto d = slice_drive(plan, p, k, nv);
  PulseSchedule s = cu_prefix_schedule(nv);
  const PulseSchedule slice = cu_slice_schedule(d.tau_us, d.rabi, d.phi, plan.s, nv);
  for (int i = 0; i < plan.n; ++i) s.append(slice);
  s.append(cu_suffix_schedule(nv));
  s.tier = Tier::Pulse;
  return s;
}

CompiledCircuit compile_controlled_u(const TrotterPlan& plan, const TIParams& p, const Momentum& k,
                                     const NVParams& nv) {
  plan.validate();
  p.validate();
  check_s(plan, p);
  CompiledCircuit c;
  c.lambda = physical_scale(p, nv);
  const double tau_ = plan.t / plan.n;
  if (plan.exact_u) {
    c.gates.push_back({"U_exact", {plan.t}, "N1", expm_herm(build_h_ti(p, k), plan.t)});
  } else {
    const cmat u1 = u1_matrix(), u2 = u2_matrix();
    const cmat zz = kron(Z(), Z());
    c.gates.push_back({"U1_inv", {}, "N1", u1.adjoint()});
    for (int i = 0; i < plan.n; ++i) {
      c.gates.push_back({"H2", {tau_, p.A * k.kx, p.A * k.ky, p.delta}, "N1",
                         expm_herm(h2_matrix(p, k), tau_)});
      c.gates.push_back({"U2_inv", {}, "N1", u2.adjoint()});
      c.gates.push_back({"ZZ", {plan.s * tau_, p.delta}, "N1", expm_herm(p.delta * zz, plan.s * tau_)});
      c.gates.push_back({"U2", {}, "N1", u2});
    }
    c.gates.push_back({"U1", {}, "N1", u1});
  }
  c.unitary = cmat::Identity(8, 8);
  for (const auto& g : c.gates) c.unitary = controlled(g.u) * c.unitary;

  cmat b0(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) b0(i, j) = c.unitary(2 * i, 2 * j);
  c.block0_error = phase_distance(b0, cmat::Identity(4, 4));
  if (c.block0_error > kUnitaryTol)
    throw ContractError("controlled-U: |0>_N block is not the identity up to phase");
  if (!is_unitary(c.unitary)) throw ContractError("controlled-U: gate product not unitary");

  if (plan.tier != Tier::Gate && !plan.exact_u) c.schedule = controlled_u_schedule(plan, p, k, nv);
  c.schedule.tier = plan.tier;
  return c;
}

PulseSchedule n_hadamard(const NVParams& nv) {
  // H = Z R_y(-pi/2)
  PulseSchedule s = rf_rotation(PulseKind::RF_N, -kPi / 2, kPi / 2, nv);
  s.push(frame_z(2, kPi));
  return s;
}

PulseSchedule full_run_schedule(const TrotterPlan& plan, const TIParams& p, const Momentum& k,
                                const NVParams& nv) {
  PulseSchedule s = n_hadamard(nv);
  s.append(controlled_u_schedule(plan, p, k, nv));
  s.append(n_hadamard(nv));
  // N -> electron readout swap; counted for timing, readout itself is projective
  PulseSchedule swap = rf_rotation(PulseKind::RF_N, kPi, 0.0, nv);
  swap.push(selective_pulse(kPi, 0.0, 1, nv));
  swap.append(rf_rotation(PulseKind::RF_N, kPi, 0.0, nv));
  for (auto& e : swap.elements) e.timing_only = true;
  s.append(swap);
  s.tier = plan.tier;
  return s;
}

FidelityStats fidelity_sweep(const FidelityGrid& g, int n, int jobs) {
  struct Task {
    double s, kx, ky;
  };
  std::vector<Task> tasks;
  for (double s : g.s_values)
    for (double kx : g.kx)
      for (double ky : g.ky) tasks.push_back({s, kx, ky});
  std::vector<double> mins(tasks.size()), sums(tasks.size());
  const double tmax = kPi / (4 * g.delta);
  parallel_for(static_cast<int>(tasks.size()), jobs, [&](int i) {
    const auto& tk = tasks[i];
    TIParams p{g.A, g.delta, tk.s * g.delta};
    const Momentum k{tk.kx, tk.ky};
    Eigen::SelfAdjointEigenSolver<cmat> es(build_hs(p, k).hs);
    double mn = 1.0, sm = 0.0;
    for (int j = 0; j < g.t_points; ++j) {
      const double t = tmax * j / (g.t_points - 1);
      const cmat ue = exact_hs_unitary(p, k, t);
      const cmat ut = trotter_unitary(make_plan(p, t, n), p, k);
      for (int m = 0; m < 4; ++m) {
        const cvec v = es.eigenvectors().col(m);
        const double f = fidelity(ue * v, ut * v);
        mn = std::min(mn, f);
        sm += f;
      }
    }
    mins[i] = mn;
    sums[i] = sm / (4.0 * g.t_points);
  });
  FidelityStats st;
  st.n = n;
  st.min_fidelity = 1.0;
  double tot = 0;
  for (size_t i = 0; i < tasks.size(); ++i) {
    st.min_fidelity = std::min(st.min_fidelity, mins[i]);
    tot += sums[i];
  }
  st.mean_fidelity = tot / tasks.size();
  st.max_error = std::sqrt(std::max(0.0, 1.0 - st.min_fidelity));
  return st;
}

double fit_exponent(const std::vector<int>& n, const std::vector<double>& err) {
  if (n.size() != err.size() || n.size() < 2) throw InputError("fit_exponent needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(n.size());
  for (size_t i = 0; i < n.size(); ++i) {
    const double x = std::log(n[i]), y = std::log(err[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace tisim
