#pragma once
#include <string>
#include <vector>

#include "json.hpp"
#include "tisim/trotter_circuit.hpp"

namespace tisim {

enum class StateMode { Eigenstate, Amplitudes, Random };

struct InputStateSpec {
  StateMode mode = StateMode::Eigenstate;
  int index = 0;                  // eigenstate index, ascending energy
  std::vector<cplx> amplitudes;   // over `basis`
  std::string basis = "eigen";    // "eigen" or "computational"
  std::uint64_t seed = 0;
};
// normalized 4-vector on sigma x tau
cvec resolve_state(const InputStateSpec& s, const TIParams& p, const Momentum& k);

double max_energy(const TIParams& p, const Momentum& k);   // 1.2 (A|k| + eps_b + delta)
double default_dt(const TIParams& p, const Momentum& k);   // pi / (2 E_max)
void check_nyquist(double dt, const TIParams& p, const Momentum& k);

struct SignalOptions {
  Tier tier = Tier::Gate;
  bool exact_u = false;
  int n = 2;                // Trotter slices per sampling interval
  int M = 256;
  double dt = 0.0;          // 0 selects default_dt
  bool y_readout = true;    // false keeps the cosine-only readout
  int shots = 0;            // 0 gives exact Born probabilities
  std::uint64_t seed = 0;
  NoiseModel noise;
  NVParams nv;
  int jobs = 1;
};

struct SignalRecord {
  std::vector<double> t;
  std::vector<cplx> g;
  std::vector<double> stderr_;
  double dt = 0;
  double leakage = 0;   // worst computational-subspace loss over the grid (pulse tiers)
  std::string to_csv() const;
};

SignalRecord run_signal(const InputStateSpec& state, const TIParams& p, const Momentum& k,
                        const SignalOptions& opt);

struct ExtractOptions {
  std::string window = "hann";  // or "rect"
  double threshold = 0.02;      // minimum peak weight, as a fraction of unit total weight
};

struct Peak {
  double energy = 0, weight = 0, uncertainty = 0;
};

struct SpectralResult {
  std::vector<Peak> peaks;   // ascending energy
  double resolution = 0;     // 2 pi / (M dt)
  std::string window;
  std::string diagnostic;
  nlohmann::json to_json() const;
};

SpectralResult extract_spectrum(const SignalRecord& sig, const ExtractOptions& opt = {});
SpectralResult extract_spectrum(const std::vector<cplx>& g, double dt, const ExtractOptions& opt = {});
// unwindowed DFT power per bin divided by M^2; sums to mean |g|^2
std::vector<double> dft_power(const std::vector<cplx>& g);

struct QptOptions {
  std::vector<double> s_values{0.57, 1.0, 1.43};
  double A = 1.0, delta = 1.0;
  double ky_min = -2.0, ky_max = 2.0;
  int ky_steps = 81;
  SignalOptions signal;
};

struct QptEntry {
  double s = 0;
  BandTable bands;            // extracted
  double min_gap = 0;
  Phase phase = Phase::Insulating;
  std::vector<double> crossings;
  double resolution = 0;
};

std::vector<QptEntry> qpt_scan(const QptOptions& opt);

}  // namespace tisim
