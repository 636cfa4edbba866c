#pragma once
#include <string>
#include <vector>

#include "json.hpp"
#include "tisim/nv_machine.hpp"
#include "tisim/ti_model.hpp"

namespace tisim {

struct TrotterPlan {
  double t = 0.0;   // simulated time in TI units
  int n = 1;        // slices
  double s = 1.0;   // eps_b / delta, realised by stretching the H1 slices
  Tier tier = Tier::Gate;
  bool exact_u = false;  // reference mode: exact exponential instead of slices
  void validate() const;
};
// plan whose s matches p.eps_b / p.delta
TrotterPlan make_plan(const TIParams& p, double t, int n, Tier tier = Tier::Gate);

struct HsPair {
  cmat hs;
  cmat u1;
};
cmat u1_matrix();
cmat u2_matrix();
HsPair build_hs(const TIParams& p, const Momentum& k);

cmat h2_matrix(const TIParams& p, const Momentum& k);
cmat exact_hs_unitary(const TIParams& p, const Momentum& k, double t);
cmat trotter_unitary(const TrotterPlan& plan, const TIParams& p, const Momentum& k);

struct Drive {
  double b1 = 0.0;   // gauss
  double phi = 0.0;  // rad
};
Drive drive_mapping(double A, double kx, double ky, double gamma_e);
Momentum drive_unmapping(const Drive& d, double A, double gamma_e);

struct Gate {
  std::string name;
  std::vector<double> params;
  std::string subspace;  // "N1" for gates controlled on |1>_N
  cmat u;                // 4x4 action on sigma x tau
};

struct CompiledCircuit {
  std::vector<Gate> gates;
  cmat unitary;          // 8x8 gate-tier product on sigma x tau x N
  PulseSchedule schedule;
  double lambda = 1.0;   // physical rad/us per TI energy unit
  double block0_error = 0.0;
  nlohmann::json gates_json() const;
};

// time-scale factor between the TI model and the register: lambda * delta = J_C / 4
double physical_scale(const TIParams& p, const NVParams& nv);
double v0_duration(const NVParams& nv);

CompiledCircuit compile_controlled_u(const TrotterPlan& plan, const TIParams& p, const Momentum& k,
                                     const NVParams& nv = NVParams{});
// pieces of the pulse schedule: U1^-1, one Trotter slice, U1
struct SliceDrive {
  double tau_us;  // physical slice length
  double rabi;    // rad/us
  double phi;
};
SliceDrive slice_drive(const TrotterPlan& plan, const TIParams& p, const Momentum& k,
                       const NVParams& nv);
PulseSchedule cu_prefix_schedule(const NVParams& nv);
PulseSchedule cu_slice_schedule(double tau_phys, double rabi, double phi, double s_ratio,
                                const NVParams& nv);
PulseSchedule cu_suffix_schedule(const NVParams& nv);
// the pulse schedule alone, in physical units
PulseSchedule controlled_u_schedule(const TrotterPlan& plan, const TIParams& p, const Momentum& k,
                                    const NVParams& nv);
// N Hadamard as an RF rotation followed by a software Z
PulseSchedule n_hadamard(const NVParams& nv);
// preparation Hadamard, controlled-U, readout Hadamard and the (timing only) readout swap
PulseSchedule full_run_schedule(const TrotterPlan& plan, const TIParams& p, const Momentum& k,
                                const NVParams& nv);

struct FidelityGrid {
  std::vector<double> s_values{0.57, 1.0, 1.43};
  std::vector<double> kx{-1.0, -0.5, 0.0, 0.5, 1.0};
  std::vector<double> ky{-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};
  int t_points = 41;       // t in [0, pi/(4 delta)]
  double A = 1.0, delta = 1.0;
};
struct FidelityStats {
  int n = 0;
  double min_fidelity = 1.0;
  double mean_fidelity = 1.0;
  double max_error = 0.0;  // sqrt(1 - min F)
};
FidelityStats fidelity_sweep(const FidelityGrid& g, int n, int jobs = 1);
// least-squares slope of log(error) against log(n)
double fit_exponent(const std::vector<int>& n, const std::vector<double>& err);

}  // namespace tisim
