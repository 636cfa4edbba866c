#pragma once
#include <array>
#include <map>
#include <mutex>
#include "json.hpp"
#include <string>
#include <vector>

#include "tisim/spin_core.hpp"

namespace tisim {

// all frequencies in rad/us, gyromagnetic ratios in rad/us per gauss
struct NVParams {
  double D = kTwoPi * 2870.0;
  double gamma_e = kTwoPi * 2.8;
  double gamma_c = kTwoPi * 1.1e-3;
  double gamma_n = kTwoPi * 0.3077e-3;
  double Q = kTwoPi * -5.1;
  double J_C = kTwoPi * 14.0;
  double J_N = kTwoPi * 2.1;
  double B0 = 500.0;

  // control defaults
  double hard_rabi = kTwoPi * 60.0;  // composite segment Rabi rate
  double rf_c_us = 2.0;              // nominal RF-C block length before synchronisation
  double rf_n_us = 20.0;
  int selective_sync = 2;            // off-target lines complete this many full cycles

  void validate() const;
  double delta_eff() const { return J_C / 4.0; }
};

enum class Tier { Gate, Pulse, Noisy };
Tier parse_tier(const std::string& s);
std::string to_string(Tier t);

enum class PulseKind { MW_resonant, MW_selective, RF_N, RF_C, FreeEvolution, ElectronFlip, FrameZ };
enum class Shape { Square, Composite };
std::string to_string(PulseKind k);
PulseKind parse_kind(const std::string& s);

struct PulseElement {
  PulseKind kind = PulseKind::FreeEvolution;
  double duration_us = 0.0;
  double amplitude_gauss = 0.0;
  double phase_rad = 0.0;
  double detuning = 0.0;   // drive frequency offset from the frame line, rad/us
  int target = 1;          // m_N level for MW_selective
  Shape shape = Shape::Square;
  double angle = 0.0;      // composite / flip / selective / frame rotation angle
  int frame_spin = 0;      // FrameZ: 0 electron, 1 carbon, 2 nitrogen
  bool timing_only = false;
  void validate() const;
};

struct PulseSchedule {
  std::vector<PulseElement> elements;
  Tier tier = Tier::Pulse;
  double total_us() const;
  void append(const PulseSchedule& other);
  void push(const PulseElement& e) { elements.push_back(e); }
};

struct TimingReport {
  double total_us = 0, rf_us = 0, mw_us = 0, free_us = 0;
};

struct NoiseModel {
  double t2_star_e = 3.0;
  double t2_e = 200.0;
  int mc_samples = 100;
  std::uint64_t seed = 0;
  bool t2_envelope = false;      // multiply coherences by exp(-t/T2e)
  bool composite_noise = false;  // include the detuning inside hard composite pulses
  void validate() const;
  double sigma() const;          // rad/us
};

// product basis index, e: m_S {+1,0,-1}, c: m_C {+1/2,-1/2}, n: m_N {+1,0,-1}
int nv_index(int e, int c, int n);

struct NVOperators {
  cmat Sz, Cz, Nz, Sp, Cp, Np;  // Sp = |+1><0| + |0><-1| etc.
};
const NVOperators& nv_operators();
HilbertSpace nv_space();

cmat build_h0(const NVParams& p);

struct RotatingFrame {
  double we, wc, wn;
};
RotatingFrame rotating_frame(const NVParams& p);
// H0 minus the frame generator; diagonal
cmat residual_hamiltonian(const NVParams& p);

struct QubitEmbedding {
  std::array<int, 8> comp{};  // 18-level index of comp state s*4 + t*2 + v
  cmat P;                      // 18x8 isometry
  double delta_eff = 0;        // J_C/4 sigma_z tau_z
  double tau_by_term = 0;      // J_C/4 tau_z left over from J_C S_z C_z
  std::string describe() const;
};
QubitEmbedding qubit_embedding(const NVParams& p);
HilbertSpace comp_space();  // {2,2,2} = sigma, tau, N
double leakage(const cmat& u18);

// element builders
double hard_pulse_duration(double theta, const NVParams& p);
PulseElement hard_rotation(double theta, double phi, const NVParams& p);
PulseElement electron_flip(double phi, const NVParams& p);
PulseElement mw_drive(double rabi, double phi, double t, const NVParams& p);
PulseElement free_evolution(double t);
PulseElement frame_z(int spin, double angle);
PulseElement selective_pulse(double theta, double phi, int target, const NVParams& p);
// nuclear rotation with electron flips at the midpoint and end, duration synchronised so
// the off-resonant electron branch returns to identity. phi is the qubit axis.
PulseSchedule rf_rotation(PulseKind kind, double theta, double phi, const NVParams& p);
double rf_sync_duration(double J, double t_nominal, double theta);
double selective_duration(double theta, const NVParams& p);

// pulse and gate level propagators for single elements. Driven elements are returned
// in their co-moving drive frame (equivalent to a software Z update on the driven spin).
class PulseEngine {
 public:
  explicit PulseEngine(NVParams p);
  const NVParams& params() const { return p_; }
  const cmat& R() const { return R_; }
  const cmat& R8() const { return R8_; }

  cmat pulse(const PulseElement& e, double noise = 0.0) const;             // 18x18
  cvec pulse_apply(const PulseElement& e, const cvec& psi, double noise = 0.0) const;
  cmat gate(const PulseElement& e, double noise = 0.0) const;              // 8x8
  bool rwa_warning(const PulseElement& e) const;

 private:
  cmat drift(double noise) const;
  cmat composite(const PulseElement& e, double noise) const;
  cmat selective(const PulseElement& e, double noise) const;
  cmat frame_op(int spin, double angle, bool full) const;
  double rf_n_stark(const PulseElement& e) const;

  NVParams p_;
  cmat R_, R8_;
  cmat Sz8_, Cz8_, Nz8_, Sp8_, Cp8_, Np8_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<long long, long long>, cmat> cache_;
};

struct ApplyResult {
  cmat u;
  bool rwa_warning = false;
};
// left-multiplies u (8 or 18 dimensional, matching the tier) by the element
ApplyResult apply_pulse(const cmat& u, const PulseElement& e, const PulseEngine& eng, Tier tier);

cmat schedule_propagator(const PulseSchedule& s, const PulseEngine& eng, Tier tier,
                         double noise = 0.0);
cvec schedule_apply(const PulseSchedule& s, const PulseEngine& eng, Tier tier, const cvec& psi,
                    double noise = 0.0, bool composite_noise = false);

enum class Flips { None, MidpointEnd };
PulseSchedule refocused_schedule(double duration, Flips flips, const NVParams& p);
cmat refocused_interval(double duration, Flips flips, Tier tier, const PulseEngine& eng,
                        double noise = 0.0);

std::uint64_t splitmix64(std::uint64_t x);
// per-sample quasi-static detunings, reproducible for a given seed
std::vector<double> sample_detunings(const NoiseModel& n, std::uint64_t stream = 0);

struct NoisyEnsemble {
  std::vector<cvec> states;
  std::vector<double> detunings;
  double duration_us = 0;
};
NoisyEnsemble noisy_run(const PulseSchedule& s, const NoiseModel& n, const cvec& initial,
                        const PulseEngine& eng);

struct MeanErr {
  double mean = 0, stderr_ = 0;
};
MeanErr mean_stderr(const std::vector<double>& x);

TimingReport schedule_timing(const PulseSchedule& s);

nlohmann::json to_json(const PulseElement& e);
nlohmann::json to_json(const PulseSchedule& s);
nlohmann::json to_json(const TimingReport& t);
PulseSchedule schedule_from_json(const nlohmann::json& j);

}  // namespace tisim
