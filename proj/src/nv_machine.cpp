#include "tisim/nv_machine.hpp"

#include <cmath>
#include <sstream>

namespace tisim {

namespace {

// Five-segment composite rotations with alternating phases (phi, phi+pi, ...), each
// segment a square plateau between sin^2 ramps. Angles are in units where the ramp of
// one segment edge carries RHO/2 of rotation. Solved for robustness against electron
// detuning |h| <= 0.085 * Rabi; the last angle is fixed by the net rotation.
constexpr double kRho = 0.2262;
constexpr int kRampSteps = 8;
constexpr std::array<double, 4> kHalfPi = {0.258659382801722, 2.948003428704382,
                                           6.904683143652140, 3.775224956771824};
constexpr std::array<double, 4> kPiRot = {7.573650648254104, 9.368031313139310,
                                          13.013539133629463, 9.368030801424331};

std::array<double, 5> segment_angles(double theta) {
  const bool half = std::abs(theta - kPi / 2) < 1e-9;
  const bool full = std::abs(theta - kPi) < 1e-9;
  if (!half && !full) throw InputError("composite hard pulses exist for pi/2 and pi rotations only");
  const auto& x = half ? kHalfPi : kPiRot;
  const double net = half ? 2.5 * kPi : 3.0 * kPi;
  return {x[0], x[1], x[2], x[3], net - (x[0] - x[1] + x[2] - x[3])};
}

double ramp_shape(int j) {
  const double s = std::sin(0.5 * kPi * (j + 0.5) / kRampSteps);
  return s * s;
}

cmat rz_half(double angle) {  // exp(-i angle/2 Z) on a qubit
  cmat m = cmat::Zero(2, 2);
  m(0, 0) = std::exp(-kI * angle / 2.0);
  m(1, 1) = std::exp(kI * angle / 2.0);
  return m;
}

cmat rot_xy(double theta, double phi) {
  return expm_herm(std::cos(phi) * pauli::X() + std::sin(phi) * pauli::Y(), theta / 2.0);
}

long long key_of(double x) { return std::llround(x * 1e12); }

}  // namespace

void NVParams::validate() const {
  if (!(J_C > 0)) throw InputError("J_C must be > 0");
  if (!(J_N > 0)) throw InputError("J_N must be > 0");
  if (!(D > 0)) throw InputError("D must be > 0");
  if (!(gamma_e > 0 && gamma_c > 0 && gamma_n > 0)) throw InputError("gyromagnetic ratios must be > 0");
  if (!(hard_rabi > 0)) throw InputError("hard_rabi must be > 0");
  if (!(rf_c_us > 0 && rf_n_us > 0)) throw InputError("RF durations must be > 0");
  if (selective_sync < 1) throw InputError("selective_sync must be >= 1");
}

Tier parse_tier(const std::string& s) {
  if (s == "gate") return Tier::Gate;
  if (s == "pulse") return Tier::Pulse;
  if (s == "noisy") return Tier::Noisy;
  throw InputError("tier must be one of gate, pulse, noisy (got '" + s + "')");
}

std::string to_string(Tier t) {
  switch (t) {
    case Tier::Gate: return "gate";
    case Tier::Pulse: return "pulse";
    case Tier::Noisy: return "noisy";
  }
  return "?";
}

std::string to_string(PulseKind k) {
  switch (k) {
    case PulseKind::MW_resonant: return "MW_resonant";
    case PulseKind::MW_selective: return "MW_selective";
    case PulseKind::RF_N: return "RF_N";
    case PulseKind::RF_C: return "RF_C";
    case PulseKind::FreeEvolution: return "FreeEvolution";
    case PulseKind::ElectronFlip: return "ElectronFlip";
    case PulseKind::FrameZ: return "FrameZ";
  }
  return "?";
}

PulseKind parse_kind(const std::string& s) {
  for (auto k : {PulseKind::MW_resonant, PulseKind::MW_selective, PulseKind::RF_N, PulseKind::RF_C,
                 PulseKind::FreeEvolution, PulseKind::ElectronFlip, PulseKind::FrameZ})
    if (to_string(k) == s) return k;
  throw InputError("unknown pulse kind '" + s + "'");
}

void PulseElement::validate() const {
  if (!(duration_us >= 0)) throw InputError("pulse duration must be >= 0");
  if (kind == PulseKind::MW_selective && (target < -1 || target > 1))
    throw InputError("selective pulse target must be an m_N level in {-1,0,1}");
  if (kind == PulseKind::FrameZ && (frame_spin < 0 || frame_spin > 2))
    throw InputError("FrameZ spin must be 0, 1 or 2");
}

double PulseSchedule::total_us() const {
  double t = 0;
  for (const auto& e : elements) t += e.duration_us;
  return t;
}

void PulseSchedule::append(const PulseSchedule& o) {
  elements.insert(elements.end(), o.elements.begin(), o.elements.end());
}

void NoiseModel::validate() const {
  if (mc_samples < 1) throw InputError("mc_samples must be >= 1");
  if (!(t2_star_e > 0)) throw InputError("t2_star_e must be > 0");
  if (!(t2_e >= t2_star_e)) throw InputError("t2_e must be >= t2_star_e");
}

double NoiseModel::sigma() const { return std::sqrt(2.0) / t2_star_e; }

int nv_index(int e, int c, int n) { return e * 6 + c * 3 + n; }

HilbertSpace nv_space() { return HilbertSpace({3, 2, 3}); }
HilbertSpace comp_space() { return HilbertSpace({2, 2, 2}); }

const NVOperators& nv_operators() {
  static const NVOperators ops = [] {
    cmat sz1 = cmat::Zero(3, 3), sp1 = cmat::Zero(3, 3), cz1 = cmat::Zero(2, 2), cp1 = cmat::Zero(2, 2);
    sz1(0, 0) = 1, sz1(2, 2) = -1;
    sp1(0, 1) = 1, sp1(1, 2) = 1;
    cz1(0, 0) = 0.5, cz1(1, 1) = -0.5;
    cp1(0, 1) = 1;
    const auto sp = nv_space();
    return NVOperators{embed(sz1, 0, sp), embed(cz1, 1, sp), embed(sz1, 2, sp),
                       embed(sp1, 0, sp), embed(cp1, 1, sp), embed(sp1, 2, sp)};
  }();
  return ops;
}

cmat build_h0(const NVParams& p) {
  const auto& o = nv_operators();
  return p.D * o.Sz * o.Sz + p.gamma_e * p.B0 * o.Sz - p.gamma_c * p.B0 * o.Cz -
         p.gamma_n * p.B0 * o.Nz + p.Q * o.Nz * o.Nz + p.J_C * o.Sz * o.Cz + p.J_N * o.Sz * o.Nz;
}

RotatingFrame rotating_frame(const NVParams& p) {
  return {p.D + p.gamma_e * p.B0 + p.J_N, p.J_C / 2 - p.gamma_c * p.B0,
          p.Q - p.gamma_n * p.B0 + p.J_N / 2};
}

cmat residual_hamiltonian(const NVParams& p) {
  const auto& o = nv_operators();
  const auto f = rotating_frame(p);
  cmat r = build_h0(p) - f.we * o.Sz - f.wc * o.Cz - f.wn * o.Nz;
  return cmat(r.diagonal().asDiagonal());
}

std::string QubitEmbedding::describe() const {
  std::ostringstream os;
  os << "sigma: |0>=m_S=+1, |1>=m_S=0; tau: |0>=m_C=+1/2, |1>=m_C=-1/2; "
        "N: |0>=m_N=0, |1>=m_N=+1; coupling J_C/4 = "
     << delta_eff << " rad/us";
  return os.str();
}

QubitEmbedding qubit_embedding(const NVParams& p) {
  QubitEmbedding q;
  q.P = cmat::Zero(18, 8);
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t)
      for (int v = 0; v < 2; ++v) {
        const int j = s * 4 + t * 2 + v;
        q.comp[j] = nv_index(s, t, v == 0 ? 1 : 0);
        q.P(q.comp[j], j) = 1.0;
      }
  q.delta_eff = p.J_C / 4;
  q.tau_by_term = p.J_C / 4;
  return q;
}

double leakage(const cmat& u18) {
  static const cmat P = qubit_embedding(NVParams{}).P;
  return 1.0 - (P.adjoint() * u18 * P).squaredNorm() / 8.0;
}

double hard_pulse_duration(double theta, const NVParams& p) {
  const auto a = segment_angles(std::abs(theta));
  double t = 0;
  for (double x : a) t += (x + kRho) / (2 * p.hard_rabi);
  return t;
}

PulseElement hard_rotation(double theta, double phi, const NVParams& p) {
  PulseElement e;
  e.kind = PulseKind::MW_resonant;
  e.shape = Shape::Composite;
  e.angle = std::abs(theta);
  e.phase_rad = theta < 0 ? phi + kPi : phi;
  e.amplitude_gauss = 4 * p.hard_rabi / p.gamma_e;
  e.duration_us = hard_pulse_duration(theta, p);
  return e;
}

PulseElement electron_flip(double phi, const NVParams& p) {
  PulseElement e = hard_rotation(kPi, phi, p);
  e.kind = PulseKind::ElectronFlip;
  return e;
}

PulseElement mw_drive(double rabi, double phi, double t, const NVParams& p) {
  PulseElement e;
  e.kind = PulseKind::MW_resonant;
  e.amplitude_gauss = 4 * rabi / p.gamma_e;
  e.phase_rad = phi;
  e.duration_us = t;
  return e;
}

PulseElement free_evolution(double t) {
  PulseElement e;
  e.kind = PulseKind::FreeEvolution;
  e.duration_us = t;
  return e;
}

PulseElement frame_z(int spin, double angle) {
  PulseElement e;
  e.kind = PulseKind::FrameZ;
  e.frame_spin = spin;
  e.angle = angle;
  return e;
}

double selective_duration(double theta, const NVParams& p) {
  const double c = kTwoPi * p.selective_sync;
  if (std::abs(theta) >= c) throw InputError("selective rotation angle too large for the sync order");
  return std::sqrt(c * c - theta * theta) / p.J_N;
}

PulseElement selective_pulse(double theta, double phi, int target, const NVParams& p) {
  PulseElement e;
  e.kind = PulseKind::MW_selective;
  e.target = target;
  e.angle = std::abs(theta);
  e.phase_rad = theta < 0 ? phi + kPi : phi;
  e.duration_us = selective_duration(theta, p);
  e.amplitude_gauss = 4 * (e.angle / (2 * e.duration_us)) / p.gamma_e;
  return e;
}

double rf_sync_duration(double J, double t_nominal, double theta) {
  const double k = std::max(1.0, std::round(J * t_nominal / (4 * kPi)));
  const double x = k * k * kPi * kPi - theta * theta / 4;
  if (x <= 0) throw InputError("RF rotation angle too large for the synchronised duration");
  return 4 * std::sqrt(x) / J;
}

PulseSchedule rf_rotation(PulseKind kind, double theta, double phi, const NVParams& p) {
  if (kind != PulseKind::RF_C && kind != PulseKind::RF_N)
    throw InputError("rf_rotation needs RF_C or RF_N");
  const bool c = kind == PulseKind::RF_C;
  const double J = c ? p.J_C : p.J_N;
  const double T = rf_sync_duration(J, c ? p.rf_c_us : p.rf_n_us, theta);
  const double b = std::abs(theta) / T;
  double ph = theta < 0 ? phi + kPi : phi;
  // the N raising operator maps qubit |0> (m_N=0) to |1> (m_N=+1), so its axis runs backwards
  if (!c) ph = -ph;
  PulseElement e;
  e.kind = kind;
  e.duration_us = T / 2;
  e.amplitude_gauss = 4 * b / (c ? p.gamma_c : p.gamma_n);
  e.phase_rad = ph;
  e.detuning = -J / 2;
  e.angle = theta;
  PulseSchedule s;
  s.push(e);
  s.push(electron_flip(0.0, p));
  s.push(e);
  s.push(electron_flip(0.0, p));
  return s;
}

PulseEngine::PulseEngine(NVParams p) : p_(p) {
  p_.validate();
  R_ = residual_hamiltonian(p_);
  const cmat P = qubit_embedding(p_).P;
  const auto& o = nv_operators();
  R8_ = P.adjoint() * R_ * P;
  Sz8_ = P.adjoint() * o.Sz * P;
  Cz8_ = P.adjoint() * o.Cz * P;
  Nz8_ = P.adjoint() * o.Nz * P;
  Sp8_ = P.adjoint() * o.Sp * P;
  Cp8_ = P.adjoint() * o.Cp * P;
  Np8_ = P.adjoint() * o.Np * P;
}

cmat PulseEngine::drift(double noise) const { return R_ + noise * nv_operators().Sz; }

cmat PulseEngine::composite(const PulseElement& e, double noise) const {
  const double theta = e.kind == PulseKind::ElectronFlip ? kPi : e.angle;
  const auto key = std::make_pair(key_of(theta), key_of(std::remainder(e.phase_rad, kTwoPi)));
  if (noise == 0.0) {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  const auto& o = nv_operators();
  const double a = p_.hard_rabi;
  const double tr = kRho / (2 * a);
  const double dp = 2 * p_.D + p_.J_N;  // m_S=-1 offset seen from m_S=0 in the frame
  const cmat H0 = drift(noise);
  const auto ang = segment_angles(theta);
  cmat U = cmat::Identity(18, 18);
  auto step = [&](double amp, double ph, double dt) {
    const cplx w = std::exp(-kI * ph);
    // the Stark shift from the far m_S=-1 line is tracked by moving the drive frame
    const cmat H = H0 - (amp * amp / dp) * o.Sz + amp * (w * o.Sp + std::conj(w) * o.Sp.adjoint());
    U = expm_herm(H, dt) * U;
  };
  for (int s = 0; s < 5; ++s) {
    const double ph = e.phase_rad + (s % 2 ? kPi : 0.0);
    for (int j = 0; j < kRampSteps; ++j) step(a * ramp_shape(j), ph, tr / kRampSteps);
    step(a, ph, (ang[s] - kRho) / (2 * a));
    for (int j = kRampSteps - 1; j >= 0; --j) step(a * ramp_shape(j), ph, tr / kRampSteps);
  }
  if (noise == 0.0) {
    std::lock_guard<std::mutex> lk(mu_);
    cache_.emplace(key, U);
  }
  return U;
}

cmat PulseEngine::selective(const PulseElement& e, double noise) const {
  const auto& o = nv_operators();
  const int n = 1 - e.target;
  std::array<double, 2> w{};
  for (int c = 0; c < 2; ++c) w[c] = (R_(nv_index(0, c, n), nv_index(0, c, n)) -
                                      R_(nv_index(1, c, n), nv_index(1, c, n))).real();
  const double T = e.duration_us;
  const double a = p_.gamma_e * e.amplitude_gauss / 4;
  const int steps = std::max(64, static_cast<int>(std::ceil(T / 1.5e-3)));
  const double dt = T / steps;
  const cmat H0 = drift(noise);
  cmat U = cmat::Identity(18, 18);
  for (int j = 0; j < steps; ++j) {
    const double t = (j + 0.5) * dt;
    cplx d = 0;
    for (double wc : w) d += std::exp(-kI * (e.phase_rad + wc * t));
    const cmat H = H0 + a * (d * o.Sp + std::conj(d) * o.Sp.adjoint());
    U = expm_herm(H, dt) * U;
  }
  return U;
}

cmat PulseEngine::frame_op(int spin, double angle, bool full) const {
  // software Z on one qubit of the register; non-qubit levels of that spin are untouched
  if (!full) return embed(rz_half(angle), spin, comp_space());
  cmat out = cmat::Identity(18, 18);
  for (int e = 0; e < 3; ++e)
    for (int c = 0; c < 2; ++c)
      for (int n = 0; n < 3; ++n) {
        double z = 0;
        if (spin == 0) z = e == 0 ? 1 : e == 1 ? -1 : 0;
        if (spin == 1) z = c == 0 ? 1 : -1;
        if (spin == 2) z = n == 1 ? 1 : n == 0 ? -1 : 0;
        out(nv_index(e, c, n), nv_index(e, c, n)) = std::exp(-kI * angle * z / 2.0);
      }
  return out;
}

// second-order shift of m_N=0 from the off-resonant 0 <-> -1 line, averaged over the two electron
// qubit levels (the flips inside an RF block split the time evenly between them)
double PulseEngine::rf_n_stark(const PulseElement& e) const {
  const double b = p_.gamma_n * e.amplitude_gauss / 4;
  double s = 0;
  for (int m = 0; m < 2; ++m) {
    const double gap = (R_(nv_index(m, 0, 2), nv_index(m, 0, 2)) - R_(nv_index(m, 0, 1), nv_index(m, 0, 1))).real() -
                       e.detuning;
    s += 0.5 * b * b / gap;
  }
  return s;
}

cmat PulseEngine::pulse(const PulseElement& e, double noise) const {
  e.validate();
  const auto& o = nv_operators();
  switch (e.kind) {
    case PulseKind::FreeEvolution:
      return expm_herm(drift(noise), e.duration_us);
    case PulseKind::FrameZ:
      return frame_op(e.frame_spin, e.angle, true);
    case PulseKind::ElectronFlip:
      return composite(e, noise);
    case PulseKind::MW_resonant: {
      if (e.shape == Shape::Composite) return composite(e, noise);
      const double a = p_.gamma_e * e.amplitude_gauss / 4;
      const cplx w = std::exp(-kI * e.phase_rad);
      const cmat H = drift(noise) - e.detuning * o.Sz + a * (w * o.Sp + std::conj(w) * o.Sp.adjoint());
      return expm_herm(H, e.duration_us);
    }
    case PulseKind::MW_selective:
      return selective(e, noise);
    case PulseKind::RF_C:
    case PulseKind::RF_N: {
      const bool c = e.kind == PulseKind::RF_C;
      const double b = (c ? p_.gamma_c : p_.gamma_n) * e.amplitude_gauss / 4;
      const cmat& Xz = c ? o.Cz : o.Nz;
      const cmat& Xp = c ? o.Cp : o.Np;
      const cplx w = std::exp(-kI * e.phase_rad);
      const double stark = c ? 0.0 : rf_n_stark(e);
      const cmat H = drift(noise) - (e.detuning + stark) * Xz + b * (w * Xp + std::conj(w) * Xp.adjoint());
      return expm_herm(H, e.duration_us);
    }
  }
  throw InputError("unknown pulse kind");
}

cvec PulseEngine::pulse_apply(const PulseElement& e, const cvec& psi, double noise) const {
  if (e.kind == PulseKind::FreeEvolution) return expm_herm_apply(drift(noise), e.duration_us, psi);
  if (e.kind == PulseKind::RF_C || e.kind == PulseKind::RF_N ||
      (e.kind == PulseKind::MW_resonant && e.shape == Shape::Square)) {
    const auto& o = nv_operators();
    const bool c = e.kind == PulseKind::RF_C;
    const bool mw = e.kind == PulseKind::MW_resonant;
    const double g = mw ? p_.gamma_e : c ? p_.gamma_c : p_.gamma_n;
    const cmat& Xz = mw ? o.Sz : c ? o.Cz : o.Nz;
    const cmat& Xp = mw ? o.Sp : c ? o.Cp : o.Np;
    const cplx w = std::exp(-kI * e.phase_rad);
    const double b = g * e.amplitude_gauss / 4;
    const double stark = e.kind == PulseKind::RF_N ? rf_n_stark(e) : 0.0;
    const cmat H = drift(noise) - (e.detuning + stark) * Xz + b * (w * Xp + std::conj(w) * Xp.adjoint());
    return expm_herm_apply(H, e.duration_us, psi);
  }
  return pulse(e, noise) * psi;
}

cmat PulseEngine::gate(const PulseElement& e, double noise) const {
  e.validate();
  const cmat drift8 = R8_ + noise * Sz8_;
  auto on_sigma = [](const cmat& m) { return embed(m, 0, comp_space()); };
  switch (e.kind) {
    case PulseKind::FreeEvolution:
      return expm_herm(drift8, e.duration_us);
    case PulseKind::FrameZ:
      return frame_op(e.frame_spin, e.angle, false);
    case PulseKind::ElectronFlip:
      return on_sigma(rot_xy(kPi, e.phase_rad));
    case PulseKind::MW_resonant: {
      if (e.shape == Shape::Composite) return on_sigma(rot_xy(e.angle, e.phase_rad));
      const double a = p_.gamma_e * e.amplitude_gauss / 4;
      const cplx w = std::exp(-kI * e.phase_rad);
      const cmat H = drift8 - e.detuning * Sz8_ + a * (w * Sp8_ + std::conj(w) * Sp8_.adjoint());
      return expm_herm(H, e.duration_us);
    }
    case PulseKind::MW_selective: {
      cmat sel = cmat::Identity(8, 8);
      if (e.target == 0 || e.target == 1) {
        cmat pv = cmat::Zero(2, 2);
        pv(e.target == 1 ? 1 : 0, e.target == 1 ? 1 : 0) = 1.0;
        const cmat pt = kron({pauli::I(4), pv});
        sel = cmat::Identity(8, 8) - pt + kron({rot_xy(e.angle, e.phase_rad), pauli::I(2), pv});
      }
      return expm_herm(drift8, e.duration_us) * sel;
    }
    case PulseKind::RF_C:
    case PulseKind::RF_N: {
      const bool c = e.kind == PulseKind::RF_C;
      const double b = (c ? p_.gamma_c : p_.gamma_n) * e.amplitude_gauss / 4;
      const cmat& Xz = c ? Cz8_ : Nz8_;
      const cmat& Xp = c ? Cp8_ : Np8_;
      const cplx w = std::exp(-kI * e.phase_rad);
      const cmat H = drift8 - e.detuning * Xz + b * (w * Xp + std::conj(w) * Xp.adjoint());
      return expm_herm(H, e.duration_us);
    }
  }
  throw InputError("unknown pulse kind");
}

bool PulseEngine::rwa_warning(const PulseElement& e) const {
  const cmat h0 = build_h0(p_);
  const auto f = rotating_frame(p_);
  auto E = [&](int a, int c, int n) { return h0(nv_index(a, c, n), nv_index(a, c, n)).real(); };
  std::vector<double> forbidden;
  double drive = 0;
  switch (e.kind) {
    case PulseKind::MW_resonant:
    case PulseKind::MW_selective:
    case PulseKind::ElectronFlip:
      drive = f.we + e.detuning;
      for (int c = 0; c < 2; ++c)
        for (int n = 0; n < 3; ++n) forbidden.push_back(std::abs(E(2, c, n) - E(1, c, n)));
      break;
    case PulseKind::RF_C:
      drive = std::abs(f.wc + e.detuning);
      for (int a = 0; a < 3; ++a)
        for (int n = 0; n < 2; ++n) forbidden.push_back(std::abs(E(a, 0, n) - E(a, 0, n + 1)));
      break;
    case PulseKind::RF_N:
      drive = std::abs(f.wn + e.detuning);
      for (int a = 0; a < 3; ++a) forbidden.push_back(std::abs(E(a, 0, 0) - E(a, 1, 0)));
      break;
    default:
      return false;
  }
  for (double x : forbidden)
    if (x > 0 && std::abs(drive - x) < 0.05 * x) return true;
  return false;
}

ApplyResult apply_pulse(const cmat& u, const PulseElement& e, const PulseEngine& eng, Tier tier) {
  const int dim = tier == Tier::Gate ? 8 : 18;
  if (u.rows() != dim) throw InputError("apply_pulse: operand dimension does not match the tier");
  ApplyResult r;
  r.rwa_warning = tier != Tier::Gate && eng.rwa_warning(e);
  if (e.timing_only) {
    r.u = u;
    return r;
  }
  r.u = (tier == Tier::Gate ? eng.gate(e) : eng.pulse(e)) * u;
  return r;
}

cmat schedule_propagator(const PulseSchedule& s, const PulseEngine& eng, Tier tier, double noise) {
  const int dim = tier == Tier::Gate ? 8 : 18;
  cmat u = cmat::Identity(dim, dim);
  for (const auto& e : s.elements) {
    if (e.timing_only) continue;
    u = (tier == Tier::Gate ? eng.gate(e, noise) : eng.pulse(e, noise)) * u;
  }
  return u;
}

cvec schedule_apply(const PulseSchedule& s, const PulseEngine& eng, Tier tier, const cvec& psi,
                    double noise, bool composite_noise) {
  cvec v = psi;
  for (const auto& e : s.elements) {
    if (e.timing_only) continue;
    if (tier == Tier::Gate) {
      v = eng.gate(e, noise) * v;
      continue;
    }
    const bool hard = e.kind == PulseKind::ElectronFlip ||
                      (e.kind == PulseKind::MW_resonant && e.shape == Shape::Composite);
    v = eng.pulse_apply(e, v, hard && !composite_noise ? 0.0 : noise);
  }
  return v;
}

PulseSchedule refocused_schedule(double duration, Flips flips, const NVParams& p) {
  if (!(duration >= 0)) throw InputError("refocused interval duration must be >= 0");
  PulseSchedule s;
  if (flips == Flips::None) {
    s.push(free_evolution(duration));
    return s;
  }
  s.push(free_evolution(duration / 2));
  s.push(electron_flip(0.0, p));
  s.push(free_evolution(duration / 2));
  s.push(electron_flip(0.0, p));
  return s;
}

cmat refocused_interval(double duration, Flips flips, Tier tier, const PulseEngine& eng,
                        double noise) {
  return schedule_propagator(refocused_schedule(duration, flips, eng.params()), eng, tier, noise);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<double> sample_detunings(const NoiseModel& n, std::uint64_t stream) {
  n.validate();
  std::vector<double> d(n.mc_samples);
  const std::uint64_t base = splitmix64(n.seed ^ splitmix64(stream));
  for (int i = 0; i < n.mc_samples; ++i) {
    std::mt19937_64 rng(splitmix64(base ^ static_cast<std::uint64_t>(i)));
    std::normal_distribution<double> g(0.0, n.sigma());
    d[i] = g(rng);
  }
  return d;
}

NoisyEnsemble noisy_run(const PulseSchedule& s, const NoiseModel& n, const cvec& initial,
                        const PulseEngine& eng) {
  n.validate();
  if (initial.size() != 18) throw InputError("noisy_run expects an 18-level state");
  check_normalized(initial, "noisy_run");
  NoisyEnsemble out;
  out.detunings = sample_detunings(n);
  out.duration_us = s.total_us();
  for (double d : out.detunings)
    out.states.push_back(schedule_apply(s, eng, Tier::Noisy, initial, d, n.composite_noise));
  return out;
}

MeanErr mean_stderr(const std::vector<double>& x) {
  MeanErr r;
  if (x.empty()) return r;
  double s = 0;
  for (double v : x) s += v;
  r.mean = s / x.size();
  if (x.size() > 1) {
    double q = 0;
    for (double v : x) q += (v - r.mean) * (v - r.mean);
    r.stderr_ = std::sqrt(q / (x.size() - 1) / x.size());
  }
  return r;
}

TimingReport schedule_timing(const PulseSchedule& s) {
  TimingReport t;
  for (const auto& e : s.elements) {
    t.total_us += e.duration_us;
    switch (e.kind) {
      case PulseKind::RF_C:
      case PulseKind::RF_N: t.rf_us += e.duration_us; break;
      case PulseKind::MW_resonant:
      case PulseKind::MW_selective:
      case PulseKind::ElectronFlip: t.mw_us += e.duration_us; break;
      case PulseKind::FreeEvolution: t.free_us += e.duration_us; break;
      case PulseKind::FrameZ: break;
    }
  }
  return t;
}

nlohmann::json to_json(const PulseElement& e) {
  nlohmann::json j;
  j["kind"] = to_string(e.kind);
  j["duration_us"] = e.duration_us;
  j["amplitude_gauss"] = e.amplitude_gauss;
  j["phase_rad"] = e.phase_rad;
  j["target"] = e.kind == PulseKind::MW_selective ? nlohmann::json(e.target) : nlohmann::json();
  j["detuning_rad_per_us"] = e.detuning;
  j["shape"] = e.shape == Shape::Composite ? "composite" : "square";
  j["angle_rad"] = e.angle;
  if (e.kind == PulseKind::FrameZ) j["frame_spin"] = e.frame_spin;
  if (e.timing_only) j["timing_only"] = true;
  return j;
}

nlohmann::json to_json(const PulseSchedule& s) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& e : s.elements) a.push_back(to_json(e));
  return a;
}

nlohmann::json to_json(const TimingReport& t) {
  return {{"total_us", t.total_us}, {"rf_us", t.rf_us}, {"mw_us", t.mw_us}, {"free_us", t.free_us}};
}

PulseSchedule schedule_from_json(const nlohmann::json& j) {
  PulseSchedule s;
  for (const auto& x : j) {
    PulseElement e;
    e.kind = parse_kind(x.at("kind").get<std::string>());
    e.duration_us = x.at("duration_us").get<double>();
    e.amplitude_gauss = x.value("amplitude_gauss", 0.0);
    e.phase_rad = x.value("phase_rad", 0.0);
    if (x.contains("target") && !x["target"].is_null()) e.target = x["target"].get<int>();
    e.detuning = x.value("detuning_rad_per_us", 0.0);
    e.shape = x.value("shape", std::string("square")) == "composite" ? Shape::Composite : Shape::Square;
    e.angle = x.value("angle_rad", 0.0);
    e.frame_spin = x.value("frame_spin", 0);
    e.timing_only = x.value("timing_only", false);
    e.validate();
    s.push(e);
  }
  return s;
}

}  // namespace tisim
