#include "tisim/spectroscopy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tisim/parallel.hpp"

namespace tisim {

cvec resolve_state(const InputStateSpec& s, const TIParams& p, const Momentum& k) {
  Eigen::SelfAdjointEigenSolver<cmat> es(build_h_ti(p, k));
  const cmat& V = es.eigenvectors();
  switch (s.mode) {
    case StateMode::Eigenstate:
      if (s.index < 0 || s.index > 3) throw InputError("eigenstate index must be in 0..3");
      return V.col(s.index);
    case StateMode::Amplitudes: {
      if (s.amplitudes.size() != 4) throw InputError("amplitudes need exactly 4 entries");
      cvec c(4);
      for (int i = 0; i < 4; ++i) c(i) = s.amplitudes[i];
      if (s.basis == "eigen") return normalized(V * c);
      if (s.basis == "computational") return normalized(c);
      throw InputError("basis must be 'eigen' or 'computational'");
    }
    case StateMode::Random: {
      std::mt19937_64 rng(splitmix64(s.seed));
      return random_state(4, rng);
    }
  }
  throw InputError("unknown state mode");
}

double max_energy(const TIParams& p, const Momentum& k) {
  return 1.2 * (p.A * std::hypot(k.kx, k.ky) + p.eps_b + p.delta);
}

double default_dt(const TIParams& p, const Momentum& k) { return kPi / (2 * max_energy(p, k)); }

void check_nyquist(double dt, const TIParams& p, const Momentum& k) {
  const double lim = kPi / max_energy(p, k);
  if (!(dt > 0) || dt > lim) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "Nyquist violated: dt = %.6g but dt <= %.6g is required", dt, lim);
    throw InputError(buf);
  }
}

std::string SignalRecord::to_csv() const {
  std::ostringstream os;
  os << "t_us,re_g,im_g,stderr\n";
  char buf[160];
  for (size_t i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", t[i], g[i].real(), g[i].imag(),
                  stderr_[i]);
    os << buf;
  }
  return os.str();
}

namespace {

cmat hadamard() { return (pauli::X() + pauli::Z()) / std::sqrt(2.0); }
cmat sdag() {
  cmat m = cmat::Identity(2, 2);
  m(1, 1) = -kI;
  return m;
}

double draw(double p0, int shots, std::uint64_t seed) {
  if (shots <= 0) return p0;
  std::mt19937_64 rng(splitmix64(seed));
  std::binomial_distribution<int> b(shots, std::clamp(p0, 0.0, 1.0));
  return static_cast<double>(b(rng)) / shots;
}

// ancilla readouts of an 8-dim register state (sigma, tau, N)
cplx readout8(const cvec& psi, bool y, int shots, std::uint64_t seed) {
  const auto sp = comp_space();
  const cmat ident = pauli::I(2);
  const cmat hx = embed(hadamard(), 2, sp);
  const double px = measure_subsystem(hx * psi, sp, 2, ident)[0];
  double re = 2 * draw(px, shots, seed * 2 + 0) - 1;
  double im = 0;
  if (y) {
    const double py = measure_subsystem(hx * embed(sdag(), 2, sp) * psi, sp, 2, ident)[0];
    im = 2 * draw(py, shots, seed * 2 + 1) - 1;
  }
  return {re, im};
}

// m_N = 0 minus m_N = +1 population of an 18-level state
double n_contrast(const cvec& v) {
  double p0 = 0, p1 = 0;
  for (int e = 0; e < 3; ++e)
    for (int c = 0; c < 2; ++c) {
      p0 += std::norm(v(nv_index(e, c, 1)));
      p1 += std::norm(v(nv_index(e, c, 0)));
    }
  return p0 - p1;
}

struct PulseParts {
  cmat pre, slice, suf, hx, hy;
};

PulseParts pulse_parts(const TIParams& p, const Momentum& k, const SignalOptions& o,
                       const PulseEngine& eng, double noise) {
  TrotterPlan plan = make_plan(p, o.dt, o.n);
  const auto d = slice_drive(plan, p, k, o.nv);
  PulseSchedule pre = n_hadamard(o.nv);
  pre.append(cu_prefix_schedule(o.nv));
  PulseSchedule hy;
  hy.push(frame_z(2, -kPi / 2));
  hy.append(n_hadamard(o.nv));
  auto prop = [&](const PulseSchedule& s) {
    // the schedule propagator with hard composites kept noise free unless asked
    cmat u = cmat::Identity(18, 18);
    for (const auto& e : s.elements) {
      const bool hard = e.kind == PulseKind::ElectronFlip ||
                        (e.kind == PulseKind::MW_resonant && e.shape == Shape::Composite);
      u = eng.pulse(e, hard && !o.noise.composite_noise ? 0.0 : noise) * u;
    }
    return u;
  };
  return {prop(pre), prop(cu_slice_schedule(d.tau_us, d.rabi, d.phi, plan.s, o.nv)),
          prop(cu_suffix_schedule(o.nv)), prop(n_hadamard(o.nv)), prop(hy)};
}

}  // namespace

SignalRecord run_signal(const InputStateSpec& state, const TIParams& p, const Momentum& k,
                        const SignalOptions& o_in) {
  p.validate();
  SignalOptions o = o_in;
  if (o.M < 2) throw InputError("M >= 2 samples required");
  if (o.n < 1) throw InputError("n >= 1 required");
  if (o.dt == 0.0) o.dt = default_dt(p, k);
  check_nyquist(o.dt, p, k);
  const cvec phi = resolve_state(state, p, k);

  SignalRecord r;
  r.dt = o.dt;
  r.t.resize(o.M);
  r.g.assign(o.M, 0.0);
  r.stderr_.assign(o.M, 0.0);
  for (int j = 0; j < o.M; ++j) r.t[j] = j * o.dt;

  if (o.tier == Tier::Gate) {
    cmat pre = cmat::Identity(4, 4), slice, suf = cmat::Identity(4, 4);
    if (o.exact_u) {
      slice = expm_herm(build_h_ti(p, k), o.dt);
    } else {
      pre = u1_matrix().adjoint();
      suf = u1_matrix();
      slice = trotter_unitary(make_plan(p, o.dt, o.n), p, k);
    }
    cvec v = pre * phi;
    cvec zero = cvec::Zero(2), one = cvec::Zero(2);
    zero(0) = 1, one(1) = 1;
    for (int j = 0; j < o.M; ++j) {
      const cvec u = suf * v;
      const cvec psi = (kron(phi, zero) + kron(u, one)) / std::sqrt(2.0);
      r.g[j] = readout8(psi, o.y_readout, o.shots, splitmix64(o.seed ^ static_cast<std::uint64_t>(j)));
      v = slice * v;
    }
    return r;
  }

  if (o.exact_u) throw InputError("exact-U reference mode exists at the gate tier only");
  const PulseEngine eng(o.nv);
  const cmat P = qubit_embedding(o.nv).P;
  cvec zero = cvec::Zero(2);
  zero(0) = 1;
  const cvec psi0 = P * kron(phi, zero);

  // one trajectory of the whole t grid for a fixed quasi-static detuning
  auto trajectory = [&](double noise, std::vector<cplx>& g, double& leak) {
    const auto parts = pulse_parts(p, k, o, eng, noise);
    cmat step = cmat::Identity(18, 18);
    for (int i = 0; i < o.n; ++i) step = parts.slice * step;
    cvec v = parts.pre * psi0;
    g.resize(o.M);
    leak = 0;
    for (int j = 0; j < o.M; ++j) {
      const cvec u = parts.suf * v;
      const cvec ux = parts.hx * u;
      leak = std::max(leak, 1.0 - (P.adjoint() * ux).squaredNorm());
      const double re = n_contrast(ux);
      const double im = o.y_readout ? n_contrast(parts.hy * u) : 0.0;
      g[j] = {re, im};
      v = step * v;
    }
  };

  if (o.tier == Tier::Pulse) {
    trajectory(0.0, r.g, r.leakage);
    if (o.shots > 0)
      for (int j = 0; j < o.M; ++j) {
        const auto s = splitmix64(o.seed ^ static_cast<std::uint64_t>(j));
        r.g[j] = {2 * draw((1 + r.g[j].real()) / 2, o.shots, 2 * s) - 1,
                  o.y_readout ? 2 * draw((1 + r.g[j].imag()) / 2, o.shots, 2 * s + 1) - 1 : 0.0};
      }
    return r;
  }

  // noisy tier
  const auto det = sample_detunings(o.noise, o.seed);
  std::vector<std::vector<cplx>> traj(det.size());
  std::vector<double> leaks(det.size());
  parallel_for(static_cast<int>(det.size()), o.jobs,
               [&](int i) { trajectory(det[i], traj[i], leaks[i]); });
  const double slice_len = [&] {
    const auto d = slice_drive(make_plan(p, o.dt, o.n), p, k, o.nv);
    return cu_slice_schedule(d.tau_us, d.rabi, d.phi, p.eps_b / p.delta, o.nv).total_us();
  }();
  for (int j = 0; j < o.M; ++j) {
    std::vector<double> re(det.size()), im(det.size());
    for (size_t i = 0; i < det.size(); ++i) re[i] = traj[i][j].real(), im[i] = traj[i][j].imag();
    const auto mr = mean_stderr(re), mi = mean_stderr(im);
    double env = 1.0;
    if (o.noise.t2_envelope) env = std::exp(-(j * o.n * slice_len) / o.noise.t2_e);
    r.g[j] = env * cplx(mr.mean, mi.mean);
    r.stderr_[j] = std::hypot(mr.stderr_, mi.stderr_);
  }
  for (double l : leaks) r.leakage = std::max(r.leakage, l);
  return r;
}

std::vector<double> dft_power(const std::vector<cplx>& g) {
  const int M = static_cast<int>(g.size());
  std::vector<double> out(M);
  for (int q = 0; q < M; ++q) {
    cplx x = 0;
    for (int j = 0; j < M; ++j) x += g[j] * std::exp(kI * (kTwoPi * q * j / M));
    out[q] = std::norm(x) / (double(M) * M);
  }
  return out;
}

nlohmann::json SpectralResult::to_json() const {
  nlohmann::json e = nlohmann::json::array(), w = nlohmann::json::array(), u = nlohmann::json::array();
  for (const auto& p : peaks) e.push_back(p.energy), w.push_back(p.weight), u.push_back(p.uncertainty);
  nlohmann::json j{{"energies_rad_per_us", e}, {"weights", w}, {"uncertainties", u},
                   {"resolution", resolution}, {"window", window}};
  if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
  return j;
}

SpectralResult extract_spectrum(const SignalRecord& sig, const ExtractOptions& opt) {
  return extract_spectrum(sig.g, sig.dt, opt);
}

SpectralResult extract_spectrum(const std::vector<cplx>& g, double dt, const ExtractOptions& opt) {
  const int M = static_cast<int>(g.size());
  if (M < 4) throw InputError("extract_spectrum needs at least 4 samples");
  if (!(dt > 0)) throw InputError("extract_spectrum needs dt > 0");
  std::vector<double> w(M, 1.0);
  if (opt.window == "hann") {
    for (int j = 0; j < M; ++j) w[j] = 0.5 - 0.5 * std::cos(kTwoPi * j / M);
  } else if (opt.window != "rect") {
    throw InputError("window must be 'hann' or 'rect'");
  }
  double wsum = 0;
  for (double x : w) wsum += x;

  SpectralResult r;
  r.window = opt.window;
  r.resolution = kTwoPi / (M * dt);
  auto dtft = [&](double E) {
    cplx x = 0;
    for (int j = 0; j < M; ++j) x += w[j] * g[j] * std::exp(kI * (E * j * dt));
    return std::abs(x) / wsum;
  };
  // bins q = -M/2+1 .. M/2 cover the Nyquist window (-pi/dt, pi/dt]
  const int q0 = -M / 2 + 1;
  std::vector<double> mag(M);
  for (int i = 0; i < M; ++i) mag[i] = dtft((q0 + i) * r.resolution);
  for (int i = 0; i < M; ++i) {
    const double a = mag[(i + M - 1) % M], b = mag[i], c = mag[(i + 1) % M];
    if (!(b > a && b >= c) || b < opt.threshold) continue;
    double off = 0;
    const double la = std::log(std::max(a, 1e-300)), lb = std::log(b), lc = std::log(std::max(c, 1e-300));
    const double den = la - 2 * lb + lc;
    if (den < 0) off = std::clamp(0.5 * (la - lc) / den, -0.5, 0.5);
    double E = (q0 + i + off) * r.resolution;
    const double nyq = kPi / dt;
    if (E > nyq) E -= 2 * nyq;
    if (E <= -nyq) E += 2 * nyq;
    r.peaks.push_back({E, dtft(E), 0.5 * r.resolution});
  }
  std::sort(r.peaks.begin(), r.peaks.end(), [](const Peak& x, const Peak& y) { return x.energy < y.energy; });
  // refit the amplitudes jointly at the located energies; removes leakage between neighbouring peaks
  const int K = static_cast<int>(r.peaks.size());
  if (K > 0 && K < M / 4) {
    cmat X(M, K);
    cvec y(M);
    for (int j = 0; j < M; ++j) {
      const double sw = std::sqrt(w[j]);
      y(j) = sw * g[j];
      for (int m = 0; m < K; ++m) X(j, m) = sw * std::exp(-kI * (r.peaks[m].energy * j * dt));
    }
    const Eigen::JacobiSVD<cmat> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(K - 1) > 1e-3 * sv(0)) {
      const cvec a = svd.solve(y);
      for (int m = 0; m < K; ++m) r.peaks[m].weight = std::abs(a(m));
    }
  }
  if (r.peaks.empty()) r.diagnostic = "no spectral peak above threshold";
  return r;
}

std::vector<QptEntry> qpt_scan(const QptOptions& opt) {
  if (opt.ky_steps < 2) throw InputError("ky steps >= 2 required");
  std::vector<QptEntry> out;
  for (double s : opt.s_values) {
    if (!(s > 0)) throw InputError("s values must be positive");
    const TIParams p{opt.A, opt.delta, s * opt.delta};
    SignalOptions so = opt.signal;
    if (so.dt == 0.0) {
      const double kmax = std::max(std::abs(opt.ky_min), std::abs(opt.ky_max));
      so.dt = default_dt(p, {0.0, kmax});
    }
    so.jobs = 1;
    QptEntry q;
    q.s = s;
    q.resolution = kTwoPi / (so.M * so.dt);
    q.bands.kx = 0.0;
    const int n = opt.ky_steps;
    for (int i = 0; i < n; ++i) q.bands.ky.push_back(opt.ky_min + (opt.ky_max - opt.ky_min) * i / (n - 1));
    q.bands.E.assign(n, Energies{});
    parallel_for(n * 4, opt.signal.jobs, [&](int job) {
      const int i = job / 4, m = job % 4;
      const Momentum k{0.0, q.bands.ky[i]};
      InputStateSpec st;
      st.index = m;
      const auto sp = extract_spectrum(run_signal(st, p, k, so));
      double best = -1, E = 0;
      for (const auto& pk : sp.peaks)
        if (pk.weight > best) best = pk.weight, E = pk.energy;
      q.bands.E[i][m] = E;
    });
    for (auto& row : q.bands.E) std::sort(row.begin(), row.end());

    q.min_gap = 1e300;
    std::vector<double> gap(n);
    for (int i = 0; i < n; ++i) {
      gap[i] = q.bands.E[i][2] - q.bands.E[i][1];
      q.min_gap = std::min(q.min_gap, gap[i]);
    }
    // contiguous runs of closed gap; each run is one crossing, located at its minimum
    for (int i = 0; i < n;) {
      if (gap[i] > q.resolution) {
        ++i;
        continue;
      }
      int j = i, best = i;
      while (j < n && gap[j] <= q.resolution) {
        if (gap[j] < gap[best]) best = j;
        ++j;
      }
      q.crossings.push_back(q.bands.ky[best]);
      i = j;
    }
    if (q.crossings.empty())
      q.phase = Phase::Insulating;
    else if (q.crossings.size() == 1)
      q.phase = Phase::Critical;
    else
      q.phase = Phase::Semimetallic;
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace tisim
