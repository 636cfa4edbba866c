#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "tisim/spectroscopy.hpp"

namespace tisim {

inline constexpr const char* kVersion = "1.0.0";

// bad configuration; exit code 2
struct ConfigError : InputError {
  using InputError::InputError;
};

// every command reads the same schema; flags override file values
struct RunConfig {
  double A = 1.0, delta = 1.0, eps_b = 0.0;
  double kx = 0.0, ky = 0.0;
  double ky_min = -2.0, ky_max = 2.0;
  int ky_steps = 101;
  int n = 2;
  std::vector<int> n_list{2, 4, 8, 16, 32};
  double t = 1.0;
  int M = 256;
  double dt = 0.0;
  std::string tier = "gate";
  bool exact_u = false;
  std::string readout = "xy";
  int shots = 0;
  std::string state_mode = "eigenstate";
  int state_index = 0;
  std::vector<cplx> amplitudes;
  std::string basis = "eigen";
  double t2_star = 3.0, t2 = 200.0;
  int mc_samples = 100;
  bool t2_envelope = false;
  std::vector<double> s_values{0.57, 1.0, 1.43};
  std::string window = "hann";
  double threshold = 0.02;
  double loop_kx = 0.0, loop_ky = 0.0, loop_radius = 0.2;
  int loop_points = 200, band = 1;
  double B0 = 500.0;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out = ".";

  void validate() const;
  nlohmann::json to_json() const;  // resolved config without out/jobs
  static RunConfig from_json(const nlohmann::json& j);
  TIParams ti() const { return {A, delta, eps_b}; }
  NoiseModel noise() const;
  NVParams nv() const;
  SignalOptions signal() const;
};

std::uint64_t fnv1a64(const std::string& s);
std::string config_hash(const RunConfig& c);

// full command line entry point; returns the process exit code
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tisim
