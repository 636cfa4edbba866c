#pragma once
#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "tisim/errors.hpp"

namespace tisim {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;

inline constexpr double kHermTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kNormTol = 1e-10;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline const cplx kI{0.0, 1.0};

// ordered tensor factors, e.g. {2,2} for sigma x tau or {3,2,3} for e x C x N
class HilbertSpace {
 public:
  HilbertSpace() = default;
  explicit HilbertSpace(std::vector<int> dims);
  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return total_; }
  int factors() const { return static_cast<int>(dims_.size()); }
  // product of dims after slot (stride of that factor in the flat index)
  int stride(int slot) const;

 private:
  std::vector<int> dims_;
  int total_ = 1;
};

namespace pauli {
cmat I(int n = 2);
cmat X();
cmat Y();
cmat Z();
}  // namespace pauli

cmat kron(const cmat& a, const cmat& b);
cmat kron(std::initializer_list<cmat> ops);

double max_abs(const cmat& m);
bool is_hermitian(const cmat& h, double tol = kHermTol);
bool is_unitary(const cmat& u, double tol = kUnitaryTol);

// identity on every factor except `slot`
cmat embed(const cmat& op, int slot, const HilbertSpace& space);

// exp(-i h t) through a Hermitian eigendecomposition of each connected block
// of h. Blocks are the connected components of the nonzero pattern, so
// diagonal and block-diagonal generators cost almost nothing.
cmat expm_herm(const cmat& h, double t);
// same, applied directly to a ket
cvec expm_herm_apply(const cmat& h, double t, const cvec& psi);

// public propagator: checks hermiticity and t >= 0
cmat propagator(const cmat& h, double t);

double fidelity(const cvec& a, const cvec& b);

// min over global phase of the spectral-norm distance, phase taken from arg tr(V^dag U)
double phase_distance(const cmat& u, const cmat& v);
double spectral_norm(const cmat& m);

// Born probabilities for measuring factor `slot` in the basis given by the columns of `basis`
std::vector<double> measure_subsystem(const cvec& psi, const HilbertSpace& space, int slot,
                                      const cmat& basis);
// post-measurement state for `outcome` (normalized); throws if the outcome has zero probability
cvec collapse(const cvec& psi, const HilbertSpace& space, int slot, const cmat& basis,
              int outcome);

cvec normalized(const cvec& v);
void check_normalized(const cvec& v, const char* what);

cmat random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0);
cvec random_state(int n, std::mt19937_64& rng);
cmat random_unitary(int n, std::mt19937_64& rng);

}  // namespace tisim
