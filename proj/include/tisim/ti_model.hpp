#pragma once
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "tisim/spin_core.hpp"

namespace tisim {

struct TIParams {
  double A = 1.0;
  double delta = 1.0;
  double eps_b = 0.0;
  void validate() const;
};

struct Momentum {
  double kx = 0.0;
  double ky = 0.0;
};

using Energies = std::array<double, 4>;

struct SpectrumResult {
  Energies E{};
  bool numeric = false;  // true when kx != 0 forced the diagonalization path
};

struct BandTable {
  double kx = 0.0;
  std::vector<double> ky;
  std::vector<Energies> E;
  std::string to_csv() const;
};

enum class Phase { Insulating, Critical, Semimetallic };
std::string to_string(Phase p);

struct GapResult {
  double gap = 0.0;
  Phase phase = Phase::Insulating;
};

struct WindingResult {
  int winding = 0;       // Berry phase / pi, rounded; 0 or 1 for this model
  double berry_phase = 0.0;
  double residue = 0.0;  // distance of |phase|/pi from the nearest integer
};

struct PhysicalFieldParams {
  double b_field = 1.0;  // T
  double d = 1.0;        // nm
  double v_f = 5e5;      // nm/us
  double m = 1.0;        // electron masses; ignored when zeeman is off
  bool zeeman = true;    // false is the m -> infinity limit
};

struct MagneticEnergy {
  double eps_b = 0.0;   // |v_F q_B| in rad/us
  bool negative = false;
  double q_b = 0.0;     // 1/nm
  double l_nm = 0.0;
};

// 4x4 on sigma (x) tau
cmat build_h_ti(const TIParams& p, const Momentum& k);
Energies eigenvalues_sorted(const cmat& h);
SpectrumResult spectrum_exact(const TIParams& p, const Momentum& k);
BandTable band_scan(const TIParams& p, double kx, double ky_min, double ky_max, int steps);
std::vector<double> dirac_points(const TIParams& p);
GapResult minimal_gap(const TIParams& p);

// closed polyline, last point implicitly joined to the first
using Loop = std::vector<std::pair<double, double>>;
Loop circle_loop(double kx0, double ky0, double radius, int points);
WindingResult winding_number(const TIParams& p, const Loop& loop, int band = 1);

double magnetic_length_nm(double b_tesla);
// hbar / (m v_F) in nm, the length at which the Zeeman term cancels the orbital one
double zeeman_length_nm(double m, double v_f);
MagneticEnergy magnetic_energy(const PhysicalFieldParams& f);

}  // namespace tisim
