#pragma once

// Fine-grained certainty bounds.
//
// For an ensemble of measurements t chosen with probability p(t) and a selected
// outcome projector P_t for each, the left-hand side sum_t p(t) <psi|P_t|psi>
// is the expectation of the certainty operator C = sum_t p(t) P_t. Its maximum
// over states (zeta) is therefore the top eigenvalue of C and the maximally
// certain state is the corresponding eigenvector. The hyperspherical grid
// search below is an independent brute-force check of that reformulation.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fgur/mub.hpp"
#include "fgur/numerics.hpp"
#include "fgur/qubit_geometry.hpp"

namespace fgur {

struct EnsembleTerm {
  std::string label;
  double weight = 0.0;
  DensityMatrix projector;  // rank 1..dim, idempotent
};

class MeasurementEnsemble {
 public:
  explicit MeasurementEnsemble(std::vector<EnsembleTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw DomainError("measurement ensemble has no terms");
    dim_ = terms_.front().projector.dim();
    double sum = 0.0;
    for (const auto& t : terms_) {
      if (t.projector.dim() != dim_)
        throw DomainError(detail::concat("projector '", t.label, "' has dim ", t.projector.dim(), ", expected ", dim_));
      if (!(t.weight >= 0.0)) throw DomainError(detail::concat("term '", t.label, "' has negative weight ", t.weight));
      sum += t.weight;
      const ComplexMatrix& p = t.projector.matrix();
      const double idem = (p * p - p).max_abs();
      if (idem > 1e-10) throw DomainError(detail::concat("term '", t.label, "' is not a projector: |P^2 - P| = ", idem));
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError(detail::concat("ensemble weights sum to ", sum));
  }

  /// Equal-weight ensemble of rank-one outcome projectors.
  static MeasurementEnsemble uniform(const std::vector<std::pair<std::string, StateVector>>& outcomes) {
    std::vector<EnsembleTerm> terms;
    const double w = 1.0 / static_cast<double>(outcomes.size());
    for (const auto& [label, v] : outcomes) terms.push_back({label, w, projector(v)});
    return MeasurementEnsemble(std::move(terms));
  }

  std::size_t dim() const { return dim_; }
  const std::vector<EnsembleTerm>& terms() const { return terms_; }

 private:
  std::vector<EnsembleTerm> terms_;
  std::size_t dim_ = 0;
};

struct CertaintyBound {
  double zeta = 0.0;
  StateVector maximizer;
  double gap = 0.0;     // zeta minus the second largest eigenvalue (0 in dim 1)
  bool unique = true;   // false when gap < 1e-9
};

/// sum_t p(t) P_t
inline ComplexMatrix certainty_operator(const MeasurementEnsemble& ens) {
  ComplexMatrix c(ens.dim());
  for (const auto& t : ens.terms()) c += t.projector.matrix() * cplx(t.weight);
  return c;
}

inline CertaintyBound zeta_spectral(const MeasurementEnsemble& ens) {
  const auto eig = hermitian_eig(certainty_operator(ens));
  const std::size_t n = eig.eigenvalues.size();
  CertaintyBound out;
  out.zeta = eig.largest();
  out.maximizer = eig.eigenvectors.back();
  // Fix the global phase: first non-negligible amplitude real and positive.
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(out.maximizer[i]) > 1e-12) {
      const cplx ph = std::conj(out.maximizer[i]) / std::abs(out.maximizer[i]);
      for (std::size_t r = 0; r < n; ++r) out.maximizer[r] *= ph;
      break;
    }
  }
  out.gap = n > 1 ? out.zeta - eig.eigenvalues[n - 2] : 0.0;
  out.unique = n == 1 || out.gap >= 1e-9;
  return out;
}

/// sum_t p(t) <psi|P_t|psi>, evaluated term by term.
inline double lhs_value(const MeasurementEnsemble& ens, const StateVector& psi) {
  if (psi.dim() != ens.dim())
    throw DomainError(detail::concat("state has dim ", psi.dim(), ", ensemble has dim ", ens.dim()));
  require_normalized(psi);
  double s = 0.0;
  for (const auto& t : ens.terms()) s += t.weight * t.projector.probability(psi);
  return s;
}

// ---------------------------------------------------------------------------
// Hyperspherical parametrization and grid oracle

/// x_0..x_{d-2} in [0, pi/2], phi_1..phi_{d-1} in [0, 2 pi).
struct HypersphericalAngles {
  std::vector<double> x;
  std::vector<double> phi;
};

/// cos x0 |0> + e^{i phi1} sin x0 cos x1 |1> + ... + e^{i phi_{d-1}} sin x0 ... sin x_{d-2} |d-1>
inline StateVector hyperspherical_state(const HypersphericalAngles& a) {
  if (a.x.size() != a.phi.size()) throw DomainError("hyperspherical angles: need d-1 polar and d-1 phase angles");
  const std::size_t d = a.x.size() + 1;
  StateVector v(d);
  double sin_prod = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double mag = k + 1 < d ? sin_prod * std::cos(a.x[k]) : sin_prod;
    v[k] = k == 0 ? cplx(mag, 0.0) : std::polar(mag, a.phi[k - 1]);
    if (k + 1 < d) sin_prod *= std::sin(a.x[k]);
  }
  return v;
}

struct GridOptions {
  int steps_per_angle = 60;  // points per polar angle (endpoints included) and per phase angle
  bool real_plane = false;   // only phi = 0
  std::size_t max_dim = 5;
};

struct GridSearchResult {
  double zeta = 0.0;  // best grid value, never above the true bound
  HypersphericalAngles angles;
  StateVector maximizer;
  double polar_step = 0.0;
  double phase_step = 0.0;
  std::uint64_t evaluations = 0;
};

/// Exhaustive scan of the hyperspherical grid. Polar angles take
/// steps_per_angle points on [0, pi/2] inclusive; phases take steps_per_angle
/// points on [0, 2 pi). Points are visited in lexicographic order of the angle
/// tuple (x_0, ..., phi_1, ...) and only a strictly larger value replaces the
/// incumbent, so ties resolve to the lexicographically smallest tuple.
inline GridSearchResult zeta_gridsearch(const MeasurementEnsemble& ens, const GridOptions& opt) {
  const std::size_t d = ens.dim();
  if (d > opt.max_dim)
    throw DomainError(detail::concat("zeta_gridsearch: dim ", d, " exceeds ", opt.max_dim,
                                     "; the grid grows as steps^(2d-2), use zeta_spectral instead"));
  if (d < 2) throw DomainError("zeta_gridsearch needs dim >= 2");
  if (opt.steps_per_angle < 8) throw DomainError("zeta_gridsearch needs steps_per_angle >= 8");

  const std::size_t n_polar = d - 1;
  const std::size_t n_phase = d - 1;
  const int steps = opt.steps_per_angle;
  const int phase_points = opt.real_plane ? 1 : steps;
  const double polar_step = (kPi / 2.0) / (steps - 1);
  const double phase_step = 2.0 * kPi / steps;

  const ComplexMatrix c = certainty_operator(ens);

  std::vector<int> idx(n_polar + n_phase, 0);
  HypersphericalAngles cur{std::vector<double>(n_polar, 0.0), std::vector<double>(n_phase, 0.0)};
  GridSearchResult best;
  best.zeta = -1.0;
  best.polar_step = polar_step;
  best.phase_step = opt.real_plane ? 0.0 : phase_step;

  std::vector<cplx> amp(d);
  std::vector<double> cos_x(n_polar), sin_x(n_polar);
  while (true) {
    for (std::size_t i = 0; i < n_polar; ++i) {
      cur.x[i] = idx[i] * polar_step;
      cos_x[i] = std::cos(cur.x[i]);
      sin_x[i] = std::sin(cur.x[i]);
    }
    for (std::size_t i = 0; i < n_phase; ++i) cur.phi[i] = idx[n_polar + i] * phase_step;
    double sin_prod = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double mag = k + 1 < d ? sin_prod * cos_x[k] : sin_prod;
      amp[k] = k == 0 ? cplx(mag, 0.0) : std::polar(mag, cur.phi[k - 1]);
      if (k + 1 < d) sin_prod *= sin_x[k];
    }
    double val = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      cplx row{0.0, 0.0};
      for (std::size_t col = 0; col < d; ++col) row += c(r, col) * amp[col];
      val += (std::conj(amp[r]) * row).real();
    }
    ++best.evaluations;
    if (val > best.zeta) {
      best.zeta = val;
      best.angles = cur;
    }
    // odometer increment, last index fastest
    bool wrapped = true;
    for (std::size_t pos = idx.size(); pos-- > 0;) {
      const int limit = pos < n_polar ? steps : phase_points;
      if (++idx[pos] < limit) {
        wrapped = false;
        break;
      }
      idx[pos] = 0;
    }
    if (wrapped) break;
  }
  best.maximizer = hyperspherical_state(best.angles);
  best.zeta = lhs_value(ens, best.maximizer);
  return best;
}

inline GridSearchResult zeta_gridsearch(const MeasurementEnsemble& ens, int steps_per_angle) {
  GridOptions opt;
  opt.steps_per_angle = steps_per_angle;
  return zeta_gridsearch(ens, opt);
}

// ---------------------------------------------------------------------------
// MUB specializations

inline void require_prime(int d) {
  if (d > 64 || !is_prime(d)) throw DomainError(detail::concat("d must be a prime (<= 64), got ", d));
}

/// Outcome vector j of basis k. For d = 2 the Pauli eigenbases stand in:
/// the computational label is sigma_z and k = 0 is sigma_x.
inline StateVector mub_outcome(int d, BasisLabel k, int j) {
  require_prime(d);
  if (d == 2) {
    if (k == kComputational) return pauli_eigenstate(PauliAxis::Z, j);
    if (k == 0) return pauli_eigenstate(PauliAxis::X, j);
    if (k == 1) return pauli_eigenstate(PauliAxis::Y, j);
    throw DomainError(detail::concat("basis label ", k, " out of range for d = 2"));
  }
  if (k == kComputational) {
    if (j < 0 || j >= d) throw DomainError(detail::concat("outcome index ", j, " out of range for d = ", d));
    return StateVector::basis(d, static_cast<std::size_t>(j));
  }
  return mub_vector(d, k, j);
}

/// The equal-weight pair (j1 of k1, j2 of k2).
inline MeasurementEnsemble mub_pair_ensemble(int d, BasisLabel k1, int j1, BasisLabel k2, int j2) {
  if (k1 == k2) throw DomainError("outcome pair must come from two different bases");
  return MeasurementEnsemble::uniform({{"(" + std::to_string(j1) + "," + basis_label_name(k1) + ")", mub_outcome(d, k1, j1)},
                                       {"(" + std::to_string(j2) + "," + basis_label_name(k2) + ")", mub_outcome(d, k2, j2)}});
}

/// 1/2 + 1/(2 sqrt d). For two rank-one projectors with weights 1/2 the top
/// eigenvalue is (1 + |<u|v>|)/2, and MUB overlaps have modulus 1/sqrt d.
inline double mub_pair_bound(int d) {
  require_prime(d);
  return 0.5 + 0.5 / std::sqrt(static_cast<double>(d));
}

inline double all_outcome_pairs_bound(int d, BasisLabel k1, int j1, BasisLabel k2, int j2) {
  if (k1 == k2) throw DomainError("all_outcome_pairs_bound: identical bases; the relation degenerates to orthogonality");
  return zeta_spectral(mub_pair_ensemble(d, k1, j1, k2, j2)).zeta;
}

/// sigma_x / sigma_z ensemble with weights 1/2 and the selected outcomes.
inline MeasurementEnsemble pauli_ensemble(std::vector<std::pair<PauliAxis, int>> selection) {
  std::vector<std::pair<std::string, StateVector>> outs;
  for (const auto& [axis, o] : selection)
    outs.push_back({std::to_string(o) + "^(" + std::string(1, axis_name(axis)) + ")", pauli_eigenstate(axis, o)});
  return MeasurementEnsemble::uniform(outs);
}

}  // namespace fgur
