#include "tisim/spin_core.hpp"

#include <Eigen/Eigenvalues>
#include <numeric>
#include <string>

namespace tisim {

HilbertSpace::HilbertSpace(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InputError("HilbertSpace needs at least one factor");
  for (int d : dims_) {
    if (d <= 0) throw InputError("HilbertSpace factor dimensions must be positive");
    total_ *= d;
  }
}

int HilbertSpace::stride(int slot) const {
  int s = 1;
  for (int i = slot + 1; i < factors(); ++i) s *= dims_[i];
  return s;
}

namespace pauli {
cmat I(int n) { return cmat::Identity(n, n); }
cmat X() {
  cmat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
cmat Y() {
  cmat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
cmat Z() {
  cmat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

cmat kron(const cmat& a, const cmat& b) {
  cmat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

cmat kron(std::initializer_list<cmat> ops) {
  cmat out = cmat::Identity(1, 1);
  for (const auto& o : ops) out = kron(out, o);
  return out;
}

double max_abs(const cmat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

bool is_hermitian(const cmat& h, double tol) {
  return h.rows() == h.cols() && max_abs(h - h.adjoint()) <= tol;
}

bool is_unitary(const cmat& u, double tol) {
  return u.rows() == u.cols() && max_abs(u.adjoint() * u - cmat::Identity(u.rows(), u.cols())) <= tol;
}

cmat embed(const cmat& op, int slot, const HilbertSpace& space) {
  if (slot < 0 || slot >= space.factors())
    throw InputError("embed: slot " + std::to_string(slot) + " out of range");
  if (op.rows() != space.dims()[slot] || op.cols() != space.dims()[slot])
    throw InputError("embed: operator dimension " + std::to_string(op.rows()) +
                     " does not match factor dimension " + std::to_string(space.dims()[slot]));
  int left = 1;
  for (int i = 0; i < slot; ++i) left *= space.dims()[i];
  const int right = space.stride(slot);
  return kron({pauli::I(left), op, pauli::I(right)});
}

namespace {

// connected components of the nonzero pattern of h
std::vector<std::vector<int>> components(const cmat& h) {
  const int n = static_cast<int>(h.rows());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (h(i, j) != 0.0 || h(j, i) != 0.0) parent[find(i)] = find(j);
  std::vector<std::vector<int>> out;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(i);
  }
  return out;
}

cmat block_exp(const cmat& hb, double t) {
  Eigen::SelfAdjointEigenSolver<cmat> es(hb);
  const cvec ph = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

cmat expm_herm(const cmat& h, double t) {
  const int n = static_cast<int>(h.rows());
  cmat u = cmat::Zero(n, n);
  for (const auto& c : components(h)) {
    const int m = static_cast<int>(c.size());
    if (m == 1) {
      u(c[0], c[0]) = std::exp(-kI * t * h(c[0], c[0]).real());
      continue;
    }
    cmat hb(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) hb(a, b) = h(c[a], c[b]);
    const cmat ub = block_exp(hb, t);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) u(c[a], c[b]) = ub(a, b);
  }
  return u;
}

cvec expm_herm_apply(const cmat& h, double t, const cvec& psi) {
  const int n = static_cast<int>(h.rows());
  cvec out = cvec::Zero(n);
  for (const auto& c : components(h)) {
    const int m = static_cast<int>(c.size());
    if (m == 1) {
      out(c[0]) = std::exp(-kI * t * h(c[0], c[0]).real()) * psi(c[0]);
      continue;
    }
    cmat hb(m, m);
    cvec pb(m);
    for (int a = 0; a < m; ++a) {
      pb(a) = psi(c[a]);
      for (int b = 0; b < m; ++b) hb(a, b) = h(c[a], c[b]);
    }
    const cvec ob = block_exp(hb, t) * pb;
    for (int a = 0; a < m; ++a) out(c[a]) = ob(a);
  }
  return out;
}

cmat propagator(const cmat& h, double t) {
  if (h.rows() != h.cols()) throw InputError("propagator: generator is not square");
  if (!(t >= 0.0)) throw InputError("propagator: duration must be >= 0");
  if (!is_hermitian(h)) throw ContractError("propagator: generator is not Hermitian within 1e-12");
  cmat u = expm_herm(h, t);
  if (!is_unitary(u)) throw ContractError("propagator: result not unitary within 1e-9");
  return u;
}

double fidelity(const cvec& a, const cvec& b) {
  if (a.size() != b.size()) throw InputError("fidelity: dimension mismatch");
  const double f = std::norm(a.dot(b));
  return std::min(1.0, std::max(0.0, f));
}

double spectral_norm(const cmat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<cmat> svd(m);
  return svd.singularValues()(0);
}

double phase_distance(const cmat& u, const cmat& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw InputError("phase_distance: shape mismatch");
  const cmat w = v.adjoint() * u;
  auto dist = [&](double th) { return spectral_norm(u - std::exp(kI * th) * v); };
  // for unitaries the optimum sits at the centre of the shortest arc holding all eigenphases of V^dag U
  Eigen::ComplexEigenSolver<cmat> es(w, false);
  std::vector<double> ph;
  for (int i = 0; i < w.rows(); ++i) ph.push_back(std::arg(es.eigenvalues()(i)));
  std::sort(ph.begin(), ph.end());
  double gap = -1, centre = 0;
  for (size_t i = 0; i < ph.size(); ++i) {
    const double a = ph[i], b = i + 1 < ph.size() ? ph[i + 1] : ph[0] + kTwoPi;
    if (b - a > gap) gap = b - a, centre = b + (kTwoPi - (b - a)) / 2;
  }
  const cplx tr = w.trace();
  double best = centre, fbest = dist(centre);
  if (std::abs(tr) > 0 && dist(std::arg(tr)) < fbest) best = std::arg(tr), fbest = dist(best);
  // local golden-section polish; matters only for non-unitary blocks
  double lo = best - 0.05, hi = best + 0.05;
  const double g = 0.5 * (std::sqrt(5.0) - 1);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo), f1 = dist(x1), f2 = dist(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1, x1 = hi - g * (hi - lo), f1 = dist(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2, x2 = lo + g * (hi - lo), f2 = dist(x2);
    }
  }
  return std::min({fbest, f1, f2});
}

namespace {
void check_basis(const cmat& basis, int d) {
  if (basis.rows() != d || basis.cols() != d)
    throw InputError("measurement basis must be a square matrix spanning the factor");
  if (max_abs(basis.adjoint() * basis - cmat::Identity(d, d)) > kNormTol)
    throw InputError("measurement basis is not orthonormal within 1e-10");
}

// amplitudes of psi reshaped so that row = index of factor `slot`
cmat as_matrix(const cvec& psi, const HilbertSpace& space, int slot) {
  const int d = space.dims()[slot];
  const int right = space.stride(slot);
  const int left = space.dim() / (d * right);
  cmat m(d, left * right);
  for (int l = 0; l < left; ++l)
    for (int k = 0; k < d; ++k)
      for (int r = 0; r < right; ++r) m(k, l * right + r) = psi((l * d + k) * right + r);
  return m;
}
}  // namespace

std::vector<double> measure_subsystem(const cvec& psi, const HilbertSpace& space, int slot,
                                      const cmat& basis) {
  if (psi.size() != space.dim()) throw InputError("measure_subsystem: state dimension mismatch");
  if (slot < 0 || slot >= space.factors()) throw InputError("measure_subsystem: bad slot");
  const int d = space.dims()[slot];
  check_basis(basis, d);
  const cmat amp = basis.adjoint() * as_matrix(psi, space, slot);
  std::vector<double> p(d);
  double tot = 0;
  for (int k = 0; k < d; ++k) tot += p[k] = amp.row(k).squaredNorm();
  if (std::abs(tot - 1.0) > kNormTol) throw ContractError("measure_subsystem: state not normalized");
  return p;
}

cvec collapse(const cvec& psi, const HilbertSpace& space, int slot, const cmat& basis,
              int outcome) {
  const auto p = measure_subsystem(psi, space, slot, basis);
  if (outcome < 0 || outcome >= static_cast<int>(p.size()) || p[outcome] <= 0.0)
    throw InputError("collapse: outcome has zero probability");
  const cmat proj = basis.col(outcome) * basis.col(outcome).adjoint();
  return normalized(embed(proj, slot, space) * psi);
}

cvec normalized(const cvec& v) {
  const double n = v.norm();
  if (n == 0.0) throw InputError("cannot normalize the zero vector");
  return v / n;
}

void check_normalized(const cvec& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > kNormTol)
    throw ContractError(std::string(what) + ": state not normalized within 1e-10");
}

cmat random_hermitian(int n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  cmat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

cvec random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  cvec v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return normalized(v);
}

cmat random_unitary(int n, std::mt19937_64& rng) {
  return expm_herm(random_hermitian(n, rng), 1.0);
}

}  // namespace tisim
