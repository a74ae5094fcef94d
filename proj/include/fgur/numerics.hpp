#pragma once

// Dense complex linear algebra for small Hilbert spaces: matrices, state
// vectors, density matrices, a cyclic Jacobi eigensolver for Hermitian
// matrices and the entropy functions built on top of it.
//
// All logarithms are base 2 (bits).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fgur {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Raised when an input violates a documented precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative numerical routine fails to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename... Args>
std::string concat(Args&&... args) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << std::forward<Args>(args));
  return os.str();
}

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace detail

// ---------------------------------------------------------------------------
// StateVector

/// Complex amplitude vector. Normalization is checked by the operations that
/// require it, not by construction.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::size_t dim) : amps_(dim, cplx{0.0, 0.0}) {}
  explicit StateVector(std::vector<cplx> amps) : amps_(std::move(amps)) {}
  StateVector(std::initializer_list<cplx> amps) : amps_(amps) {}

  static StateVector basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw DomainError(detail::concat("basis index ", index, " out of range for dim ", dim));
    StateVector v(dim);
    v[index] = 1.0;
    return v;
  }

  std::size_t dim() const { return amps_.size(); }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  std::span<const cplx> amplitudes() const { return amps_; }
  auto begin() const { return amps_.begin(); }
  auto end() const { return amps_.end(); }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  StateVector normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw DomainError("cannot normalize the zero vector");
    StateVector out(*this);
    for (auto& a : out.amps_) a /= n;
    return out;
  }

  bool operator==(const StateVector&) const = default;

 private:
  std::vector<cplx> amps_;
};

/// <u|v>, antilinear in the first argument.
inline cplx inner(const StateVector& u, const StateVector& v) {
  if (u.dim() != v.dim()) throw DomainError(detail::concat("inner product of dims ", u.dim(), " and ", v.dim()));
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < u.dim(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

inline void require_normalized(const StateVector& v, double tol = 1e-10) {
  if (v.dim() == 0) throw DomainError("state vector has dimension 0");
  const double n = v.norm();
  if (std::abs(n - 1.0) > tol) throw DomainError(detail::concat("state vector not normalized: |v| = ", n));
}

// ---------------------------------------------------------------------------
// ComplexMatrix

/// Dense row-major square complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, cplx{0.0, 0.0}) {}

  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) : dim_(rows.size()), data_() {
    data_.reserve(dim_ * dim_);
    for (const auto& r : rows) {
      if (r.size() != dim_) throw DomainError("ComplexMatrix rows must form a square matrix");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Matrix whose columns are the given vectors.
  static ComplexMatrix from_columns(std::span<const StateVector> cols) {
    const std::size_t n = cols.size();
    ComplexMatrix m(n);
    for (std::size_t c = 0; c < n; ++c) {
      if (cols[c].dim() != n) throw DomainError("from_columns needs n vectors of dimension n");
      for (std::size_t r = 0; r < n; ++r) m(r, c) = cols[c][r];
    }
    return m;
  }

  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  StateVector column(std::size_t c) const {
    StateVector v(dim_);
    for (std::size_t r = 0; r < dim_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
  }

  cplx trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), detail::finite);
  }

  /// max_{a,b} |M(a,b) - conj(M(b,a))|
  double hermiticity_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = r; c < dim_; ++c)
        worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return worst;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.check_same(b);
    const std::size_t n = a.dim_;
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx ark = a(r, k);
        if (ark == cplx{}) continue;
        for (std::size_t c = 0; c < n; ++c) m(r, c) += ark * b(k, c);
      }
    return m;
  }

  friend StateVector operator*(const ComplexMatrix& a, const StateVector& v) {
    if (v.dim() != a.dim_) throw DomainError("matrix-vector dimension mismatch");
    StateVector out(a.dim_);
    for (std::size_t r = 0; r < a.dim_; ++r) {
      cplx s{0.0, 0.0};
      for (std::size_t c = 0; c < a.dim_; ++c) s += a(r, c) * v[c];
      out[r] = s;
    }
    return out;
  }

  /// Largest entrywise modulus.
  double max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : data_) s += std::norm(x);
    return std::sqrt(s);
  }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  void check_same(const ComplexMatrix& o) const {
    if (o.dim_ != dim_) throw DomainError(detail::concat("matrix dimension mismatch: ", dim_, " vs ", o.dim_));
  }

  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

/// |u><v|
inline ComplexMatrix outer(const StateVector& u, const StateVector& v) {
  if (u.dim() != v.dim()) throw DomainError("outer product dimension mismatch");
  ComplexMatrix m(u.dim());
  for (std::size_t r = 0; r < u.dim(); ++r)
    for (std::size_t c = 0; c < v.dim(); ++c) m(r, c) = u[r] * std::conj(v[c]);
  return m;
}

/// <u|M|v>
inline cplx sandwich(const StateVector& u, const ComplexMatrix& m, const StateVector& v) { return inner(u, m * v); }

/// <v|M|v> for Hermitian M; the imaginary part is discarded.
inline double expectation(const ComplexMatrix& m, const StateVector& v) { return sandwich(v, m, v).real(); }

// ---------------------------------------------------------------------------
// Hermitian eigensolver

struct SpectralDecomposition {
  std::vector<double> eigenvalues;        // ascending
  std::vector<StateVector> eigenvectors;  // eigenvectors[i] pairs with eigenvalues[i]

  double largest() const { return eigenvalues.back(); }
  double smallest() const { return eigenvalues.front(); }

  ComplexMatrix reconstruct() const {
    ComplexMatrix m(eigenvalues.size());
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) m += outer(eigenvectors[i], eigenvectors[i]) * eigenvalues[i];
    return m;
  }
};

struct EigenOptions {
  double hermitian_tol = 1e-10;
  double offdiag_tol = 1e-12;
  int max_sweeps = 100;
  std::size_t max_dim = 64;
};

namespace detail {

inline double offdiag_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of a(p,q) with a diagonal unitary and
/// then applies a real Givens rotation, so A <- J^H A J with J = P R. Sweeps
/// stop once the off-diagonal Frobenius norm drops below
/// offdiag_tol * max(1, |A|_F).
inline SpectralDecomposition hermitian_eig(const ComplexMatrix& m, const EigenOptions& opt = {}) {
  const std::size_t n = m.dim();
  if (n == 0) throw DomainError("hermitian_eig: empty matrix");
  if (n > opt.max_dim) throw DomainError(detail::concat("hermitian_eig: dim ", n, " exceeds supported maximum ", opt.max_dim));
  if (!m.all_finite()) throw DomainError("hermitian_eig: matrix has non-finite entries");
  const double defect = m.hermiticity_defect();
  if (defect > opt.hermitian_tol)
    throw DomainError(detail::concat("hermitian_eig: matrix not Hermitian, max |M - M^H| = ", defect));

  ComplexMatrix a = m;
  for (std::size_t r = 0; r < n; ++r) {
    a(r, r) = a(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      const cplx avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
      a(r, c) = avg;
      a(c, r) = std::conj(avg);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = opt.offdiag_tol * std::max(1.0, a.frobenius_norm());

  int sweep = 0;
  double off = detail::offdiag_norm(a);
  while (off > threshold) {
    if (sweep++ >= opt.max_sweeps)
      throw ConvergenceError(detail::concat("hermitian_eig: no convergence after ", opt.max_sweeps,
                                            " sweeps, off-diagonal residual ", off));
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const cplx phase = apq / r;  // e^{i alpha}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J restricted to (p,q): [[c, s], [-s conj(phase), c conj(phase)]]
        const cplx jpp = c;
        const cplx jpq = s;
        const cplx jqp = -s * std::conj(phase);
        const cplx jqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    off = detail::offdiag_norm(a);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  SpectralDecomposition out;
  out.eigenvalues.reserve(n);
  out.eigenvectors.reserve(n);
  for (std::size_t idx : order) {
    out.eigenvalues.push_back(a(idx, idx).real());
    out.eigenvectors.push_back(v.column(idx));
  }
  return out;
}

// ---------------------------------------------------------------------------
// DensityMatrix

struct DensityTolerances {
  double hermitian = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
};

/// Validated density operator: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, const DensityTolerances& tol = {}) : m_(std::move(m)) {
    if (m_.dim() == 0) throw DomainError("density matrix has dimension 0");
    if (!m_.all_finite()) throw DomainError("density matrix has non-finite entries");
    const double herm = m_.hermiticity_defect();
    if (herm > tol.hermitian) throw DomainError(detail::concat("density matrix not Hermitian: defect ", herm));
    const cplx tr = m_.trace();
    if (std::abs(tr - 1.0) > tol.trace) throw DomainError(detail::concat("density matrix trace ", tr.real(), " != 1"));
    const double lo = hermitian_eig(m_).smallest();
    if (lo < tol.min_eigenvalue) throw DomainError(detail::concat("density matrix has negative eigenvalue ", lo));
  }

  std::size_t dim() const { return m_.dim(); }
  const ComplexMatrix& matrix() const { return m_; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  /// <v|rho|v>
  double probability(const StateVector& v) const { return expectation(m_, v); }

  static DensityMatrix maximally_mixed(std::size_t dim) {
    return DensityMatrix(ComplexMatrix::identity(dim) * cplx(1.0 / static_cast<double>(dim)));
  }

  /// sum_i w_i rho_i; weights must form a distribution.
  static DensityMatrix mixture(std::span<const double> weights, std::span<const DensityMatrix> states) {
    if (weights.size() != states.size() || states.empty()) throw DomainError("mixture: weights and states must match");
    ComplexMatrix acc(states.front().dim());
    for (std::size_t i = 0; i < states.size(); ++i) acc += states[i].matrix() * cplx(weights[i]);
    return DensityMatrix(std::move(acc), {1e-12, 1e-9, -1e-10});
  }

 private:
  ComplexMatrix m_;
};

/// |v><v| for a normalized v.
inline DensityMatrix projector(const StateVector& v) {
  require_normalized(v);
  return DensityMatrix(outer(v, v), {1e-12, 1e-10, -1e-10});
}

// ---------------------------------------------------------------------------
// Entropies (bits)

inline double shannon_entropy(std::span<const double> p, double sum_tol = 1e-9) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw DomainError(detail::concat("shannon_entropy: negative or NaN probability ", x));
    sum += x;
  }
  if (std::abs(sum - 1.0) > sum_tol) throw DomainError(detail::concat("shannon_entropy: probabilities sum to ", sum));
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

inline double shannon_entropy(std::initializer_list<double> p) {
  return shannon_entropy(std::span<const double>(p.begin(), p.size()));
}

inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(detail::concat("binary_entropy: p = ", p, " outside [0,1]"));
  const double q[2] = {p, 1.0 - p};
  return shannon_entropy(q);
}

/// Shannon entropy of the spectrum; eigenvalues in [-1e-10, 0) count as 0.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  auto spec = hermitian_eig(rho.matrix()).eigenvalues;
  for (double& x : spec)
    if (x < 0.0 && x >= -1e-10) x = 0.0;
  return shannon_entropy(spec);
}

// ---------------------------------------------------------------------------
// Small helpers shared by several modules

/// Modified Gram-Schmidt on the columns of m. Columns come out orthonormal and
/// the implied triangular factor has a positive real diagonal, so applying it to
/// a matrix of iid complex Gaussians yields a Haar-distributed unitary.
inline std::vector<StateVector> gram_schmidt(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<StateVector> q;
  q.reserve(n);
  for (std::size_t c = 0; c < n; ++c) {
    StateVector v = m.column(c);
    for (const auto& u : q) {
      const cplx proj = inner(u, v);
      for (std::size_t r = 0; r < n; ++r) v[r] -= proj * u[r];
    }
    const double nv = v.norm();
    if (nv < 1e-12) throw DomainError("gram_schmidt: columns are linearly dependent");
    for (std::size_t r = 0; r < n; ++r) v[r] /= nv;
    q.push_back(std::move(v));
  }
  return q;
}

/// max_{a,b} |<v_a|v_b> - delta_ab|
inline double orthonormality_defect(std::span<const StateVector> vs) {
  double worst = 0.0;
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a; b < vs.size(); ++b)
      worst = std::max(worst, std::abs(inner(vs[a], vs[b]) - (a == b ? 1.0 : 0.0)));
  return worst;
}

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

}  // namespace fgur
