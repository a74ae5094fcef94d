#pragma once

// Membrane thermodynamic cycle.
//
// Component states rho_i = (|i><i| + |i^(0)><i^(0)|)/2 with priors p_i are
// mixed through semi-transparent membranes aligned with an orthonormal basis
// {|e_j>}. Work is counted in bits (the NkT ln 2 prefactor is dropped):
//
//   W1 = H(p) + H({<e_j|rho|e_j>}) - H(chambers)     extracted by mixing
//   W2 = S(rho) - sum_i p_i S(rho_i)                  cost of the reversible return
//
// With uniform priors and a layout of one merged group plus one singleton
// component c_j per outcome, W1 - W2 equals
//
//   H_b(1/2 + 1/(2 sqrt d)) - (1/d) sum_j H_b(s_j),
//   s_j = 1/2 p(c_j^(Z) | e_j) + 1/2 p(c_j^(0) | e_j).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fgur/finegrained.hpp"
#include "fgur/numerics.hpp"

namespace fgur {

// ---------------------------------------------------------------------------
// Layout

/// For each outcome j, a partition of the component indices {0..d-1} into the
/// chamber groups that end up behind membrane j. Paper-style layouts list the
/// merged group first and the singleton last.
struct MembraneLayout {
  std::string name;
  std::vector<std::vector<std::vector<int>>> groups;

  /// d = 3: outcomes 0 and 1 split {1,2}|{0}, outcome 2 splits {0,1}|{2}.
  /// Other d: every outcome splits {1..d-1}|{0}.
  static MembraneLayout paper(int d) {
    MembraneLayout l;
    l.name = "paper";
    if (d == 3) {
      l.groups = {{{1, 2}, {0}}, {{1, 2}, {0}}, {{0, 1}, {2}}};
      return l;
    }
    for (int j = 0; j < d; ++j) l.groups.push_back(split_off(d, 0));
    return l;
  }

  /// Outcome j splits off component j.
  static MembraneLayout symmetric(int d) {
    MembraneLayout l;
    l.name = "symmetric";
    for (int j = 0; j < d; ++j) l.groups.push_back(split_off(d, j));
    return l;
  }

  static MembraneLayout finest(int d) {
    MembraneLayout l;
    l.name = "finest";
    for (int j = 0; j < d; ++j) {
      std::vector<std::vector<int>> g;
      for (int i = 0; i < d; ++i) g.push_back({i});
      l.groups.push_back(std::move(g));
    }
    return l;
  }

  static MembraneLayout single_group(int d) {
    MembraneLayout l;
    l.name = "single";
    std::vector<int> all(d);
    for (int i = 0; i < d; ++i) all[i] = i;
    for (int j = 0; j < d; ++j) l.groups.push_back({all});
    return l;
  }

  void validate(int d) const {
    if (static_cast<int>(groups.size()) != d)
      throw DomainError(detail::concat("layout has ", groups.size(), " outcomes, expected ", d));
    for (std::size_t j = 0; j < groups.size(); ++j) {
      std::vector<int> seen(d, 0);
      for (const auto& g : groups[j]) {
        if (g.empty()) throw DomainError(detail::concat("layout outcome ", j, " has an empty group"));
        for (int i : g) {
          if (i < 0 || i >= d) throw DomainError(detail::concat("layout outcome ", j, " references component ", i));
          ++seen[i];
        }
      }
      for (int i = 0; i < d; ++i)
        if (seen[i] != 1)
          throw DomainError(detail::concat("layout outcome ", j, " is not a partition: component ", i, " appears ",
                                           seen[i], " times"));
    }
  }

  /// Component in the singleton group of outcome j, if the outcome is split
  /// as exactly {merged, {c}}.
  std::optional<int> singleton(std::size_t j) const {
    const auto& g = groups.at(j);
    if (g.size() == 2 && g[1].size() == 1) return g[1][0];
    return std::nullopt;
  }

 private:
  static std::vector<std::vector<int>> split_off(int d, int c) {
    std::vector<int> rest;
    for (int i = 0; i < d; ++i)
      if (i != c) rest.push_back(i);
    if (rest.empty()) return {{c}};
    return {rest, {c}};
  }
};

// ---------------------------------------------------------------------------
// Configuration

struct CycleConfig {
  int d = 3;
  std::vector<double> priors;
  std::vector<StateVector> membrane_basis;
  MembraneLayout layout;

  static CycleConfig uniform(int d, std::vector<StateVector> basis, MembraneLayout layout) {
    return {d, std::vector<double>(d, 1.0 / d), std::move(basis), std::move(layout)};
  }

  void validate() const {
    require_prime(d);
    if (static_cast<int>(priors.size()) != d) throw DomainError(detail::concat("need ", d, " priors, got ", priors.size()));
    double sum = 0.0;
    for (double p : priors) {
      if (!(p >= 0.0)) throw DomainError(detail::concat("negative prior ", p));
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError(detail::concat("priors sum to ", sum));
    if (static_cast<int>(membrane_basis.size()) != d)
      throw DomainError(detail::concat("membrane basis has ", membrane_basis.size(), " vectors, expected ", d));
    for (const auto& e : membrane_basis)
      if (static_cast<int>(e.dim()) != d) throw DomainError("membrane basis vector has wrong dimension");
    const double defect = orthonormality_defect(membrane_basis);
    if (defect > 1e-10) throw DomainError(detail::concat("membrane basis not orthonormal: defect ", defect));
    layout.validate(d);
  }

  bool uniform_priors() const {
    return std::all_of(priors.begin(), priors.end(), [&](double p) { return std::abs(p - 1.0 / d) <= 1e-12; });
  }
};

// ---------------------------------------------------------------------------
// States and distributions

/// (|i><i| + |i^(0)><i^(0)|) / 2; the Pauli z and x bases play these roles at d = 2.
inline DensityMatrix component_state(int d, int i) {
  require_prime(d);
  if (i < 0 || i >= d) throw DomainError(detail::concat("component index ", i, " out of range for d = ", d));
  const StateVector a = mub_outcome(d, kComputational, i);
  const StateVector b = mub_outcome(d, 0, i);
  return DensityMatrix((outer(a, a) + outer(b, b)) * cplx(0.5));
}

inline std::vector<DensityMatrix> component_states(int d) {
  std::vector<DensityMatrix> out;
  out.reserve(d);
  for (int i = 0; i < d; ++i) out.push_back(component_state(d, i));
  return out;
}

inline DensityMatrix mixed_state(const CycleConfig& cfg, std::span<const DensityMatrix> components) {
  return DensityMatrix::mixture(cfg.priors, components);
}

namespace detail {

inline void check_components(const CycleConfig& cfg, std::span<const DensityMatrix> components) {
  cfg.validate();
  if (static_cast<int>(components.size()) != cfg.d)
    throw DomainError(concat("need ", cfg.d, " component states, got ", components.size()));
  for (const auto& c : components)
    if (static_cast<int>(c.dim()) != cfg.d) throw DomainError("component state has wrong dimension");
}

/// Clip probabilities that are negative only through rounding.
inline std::vector<double> clean_distribution(std::vector<double> q) {
  for (double& x : q)
    if (x < 0.0 && x > -1e-12) x = 0.0;
  return q;
}

}  // namespace detail

/// For each outcome j and each group G of layout[j]: sum_{i in G} p_i <e_j|rho_i|e_j>.
/// Ordered by outcome, then by group.
inline std::vector<double> chamber_distribution(const CycleConfig& cfg, std::span<const DensityMatrix> components) {
  detail::check_components(cfg, components);
  std::vector<double> q;
  for (int j = 0; j < cfg.d; ++j) {
    const StateVector& e = cfg.membrane_basis[j];
    for (const auto& group : cfg.layout.groups[j]) {
      double s = 0.0;
      for (int i : group) s += cfg.priors[i] * components[i].probability(e);
      q.push_back(s);
    }
  }
  return detail::clean_distribution(std::move(q));
}

/// <e_j|rho|e_j> for the mixed state rho = sum_i p_i rho_i.
inline std::vector<double> outcome_distribution(const CycleConfig& cfg, std::span<const DensityMatrix> components) {
  detail::check_components(cfg, components);
  const DensityMatrix rho = mixed_state(cfg, components);
  std::vector<double> out;
  for (const auto& e : cfg.membrane_basis) out.push_back(rho.probability(e));
  return detail::clean_distribution(std::move(out));
}

inline double work_extraction_w1(const CycleConfig& cfg, std::span<const DensityMatrix> components) {
  const auto q = chamber_distribution(cfg, components);
  const auto out = outcome_distribution(cfg, components);
  return shannon_entropy(cfg.priors) + shannon_entropy(out) - shannon_entropy(q);
}

inline double work_retrieval_w2(const CycleConfig& cfg, std::span<const DensityMatrix> components) {
  detail::check_components(cfg, components);
  double w = von_neumann_entropy(mixed_state(cfg, components));
  for (int i = 0; i < cfg.d; ++i) w -= cfg.priors[i] * von_neumann_entropy(components[i]);
  return w;
}

// ---------------------------------------------------------------------------
// Work balance

struct CounterfactualReport {
  double zeta_prime = 0.0;
  std::vector<double> singleton_args;  // s_j stretched about 1/2 so that [1-zeta, zeta] maps onto [1-zeta', zeta']
  double delta_w = 0.0;
};

struct WorkReport {
  int d = 0;
  double zeta = 0.0;  // 1/2 + 1/(2 sqrt d)
  double w1 = 0.0;
  double w2 = 0.0;
  double delta_w = 0.0;  // w1 - w2
  std::vector<double> singleton_args;
  std::optional<double> hb_form_delta_w;
  std::optional<double> consistency_residual;  // |(w1 - w2) - hb_form_delta_w|
  bool bound_respected = true;                 // every s_j <= zeta + 1e-10
  bool in_window = false;                      // every s_j in [1 - zeta, zeta]
  std::optional<CounterfactualReport> counterfactual;
};

struct DeltaWOptions {
  bool hb_form = true;
  std::optional<double> counterfactual_zeta;
};

/// s_j = 1/2 |<c_j|e_j>|^2 + 1/2 |<c_j^(0)|e_j>|^2 for the singleton component c_j of each outcome.
inline std::vector<double> singleton_arguments(const CycleConfig& cfg) {
  std::vector<double> s;
  for (int j = 0; j < cfg.d; ++j) {
    const auto c = cfg.layout.singleton(j);
    if (!c)
      throw DomainError(detail::concat("layout '", cfg.layout.name, "' has no singleton group for outcome ", j,
                                       "; the binary-entropy form needs one merged group and one singleton per outcome"));
    const StateVector& e = cfg.membrane_basis[j];
    const double pz = std::norm(inner(mub_outcome(cfg.d, kComputational, *c), e));
    const double p0 = std::norm(inner(mub_outcome(cfg.d, 0, *c), e));
    s.push_back(0.5 * pz + 0.5 * p0);
  }
  return s;
}

/// 1/2 + (s - 1/2) (zeta' - 1/2) / (zeta - 1/2), clamped to [0, 1].
inline double stretch_argument(double s, double zeta, double zeta_prime) {
  return std::clamp(0.5 + (s - 0.5) * (zeta_prime - 0.5) / (zeta - 0.5), 0.0, 1.0);
}

inline double hb_form(double zeta, std::span<const double> args) {
  double acc = binary_entropy(zeta);
  for (double s : args) acc -= binary_entropy(std::clamp(s, 0.0, 1.0)) / static_cast<double>(args.size());
  return acc;
}

/// W1 - W2 and, for uniform priors and layouts with one merged group and one singleton per outcome, the binary-entropy
/// form with its consistency residual. A counterfactual bound zeta' replaces
/// the certainty available to the membrane states: every s_j is stretched away
/// from 1/2 by (zeta' - 1/2)/(zeta - 1/2) while the retrieval cost stays that
/// of the real states. Output under that flag is a what-if, not physics.
inline WorkReport delta_w(const CycleConfig& cfg, std::span<const DensityMatrix> components, const DeltaWOptions& opt = {}) {
  WorkReport r;
  r.d = cfg.d;
  r.zeta = mub_pair_bound(cfg.d);
  r.w1 = work_extraction_w1(cfg, components);
  r.w2 = work_retrieval_w2(cfg, components);
  r.delta_w = r.w1 - r.w2;

  const bool want_args = opt.hb_form || opt.counterfactual_zeta.has_value();
  if (want_args) {
    if (!cfg.uniform_priors())
      throw DomainError(
          "the binary-entropy form of the work balance assumes uniform priors p_i = 1/d; "
          "for other priors only W1 - W2 is defined (disable the form to get the raw value)");
    r.singleton_args = singleton_arguments(cfg);
    r.bound_respected = std::all_of(r.singleton_args.begin(), r.singleton_args.end(),
                                    [&](double s) { return s <= r.zeta + 1e-10; });
    r.in_window = std::all_of(r.singleton_args.begin(), r.singleton_args.end(),
                              [&](double s) { return s >= 1.0 - r.zeta - 1e-12 && s <= r.zeta + 1e-12; });
    r.hb_form_delta_w = hb_form(r.zeta, r.singleton_args);
    r.consistency_residual = std::abs(r.delta_w - *r.hb_form_delta_w);
  }
  if (opt.counterfactual_zeta) {
    const double zp = *opt.counterfactual_zeta;
    if (!(zp > 0.5 && zp <= 1.0)) throw DomainError(detail::concat("counterfactual zeta ", zp, " must lie in (1/2, 1]"));
    CounterfactualReport cf;
    cf.zeta_prime = zp;
    for (double s : r.singleton_args) cf.singleton_args.push_back(stretch_argument(s, r.zeta, zp));
    cf.delta_w = hb_form(r.zeta, cf.singleton_args);
    r.counterfactual = std::move(cf);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Membrane bases

/// Orthonormalized matrix of iid complex Gaussians (Haar measure).
template <typename Rng>
std::vector<StateVector> random_basis(int d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const double re = g(rng);
      const double im = g(rng);
      m(r, c) = cplx(re, im);
    }
  return gram_schmidt(m);
}

inline std::vector<StateVector> computational_membranes(int d) {
  std::vector<StateVector> b;
  for (int j = 0; j < d; ++j) b.push_back(StateVector::basis(d, j));
  return b;
}

/// Deterministic per-sample generator: sample i of a run seeded with `seed`.
inline std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace detail {

/// Solves (A) x = b for a small symmetric positive definite A (row-major n x n).
inline std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
    if (!(diag > 0.0)) throw ConvergenceError("cholesky_solve: matrix not positive definite");
    a[j * n + j] = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / a[j * n + j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
    b[i] = s / a[i * n + i];
  }
  return b;
}

inline ComplexMatrix unpack(const std::vector<double>& x, int d) {
  ComplexMatrix m(d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = cplx(x[2 * (r * d + c)], x[2 * (r * d + c) + 1]);
  return m;
}

/// Levenberg-Marquardt on the raw (pre-orthonormalization) matrix entries,
/// driving s_j(basis) to the given targets. Finite-difference Jacobian,
/// minimum-norm steps since there are 2d^2 unknowns and d residuals.
inline std::optional<std::vector<StateVector>> solve_targets(const CycleConfig& base, const std::vector<double>& targets,
                                                             std::vector<double> x) {
  const int d = base.d;
  const std::size_t nv = x.size();
  CycleConfig cfg = base;
  auto residual = [&](const std::vector<double>& v, std::vector<double>& r) -> bool {
    try {
      cfg.membrane_basis = gram_schmidt(unpack(v, d));
    } catch (const DomainError&) {
      return false;
    }
    const auto s = singleton_arguments(cfg);
    r.resize(d);
    for (int j = 0; j < d; ++j) r[j] = s[j] - targets[j];
    return true;
  };
  auto sq = [](const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
  };

  std::vector<double> r;
  if (!residual(x, r)) return std::nullopt;
  double cost = sq(r);
  double lambda = 1e-3;
  const double h = 1e-7;
  std::vector<double> jac(static_cast<std::size_t>(d) * nv);
  std::vector<double> rp, rm;
  for (int iter = 0; iter < 300 && cost > 1e-30; ++iter) {
    for (std::size_t k = 0; k < nv; ++k) {
      std::vector<double> xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      if (!residual(xp, rp) || !residual(xm, rm)) return std::nullopt;
      for (int j = 0; j < d; ++j) jac[j * nv + k] = (rp[j] - rm[j]) / (2.0 * h);
    }
    std::vector<double> jjt(static_cast<std::size_t>(d) * d, 0.0);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double s = 0.0;
        for (std::size_t k = 0; k < nv; ++k) s += jac[a * nv + k] * jac[b * nv + k];
        jjt[a * d + b] = s;
      }
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      auto sys = jjt;
      for (int a = 0; a < d; ++a) sys[a * d + a] += lambda;
      std::vector<double> y;
      try {
        y = cholesky_solve(sys, r);
      } catch (const ConvergenceError&) {
        lambda *= 10.0;
        continue;
      }
      std::vector<double> xn = x;
      for (std::size_t k = 0; k < nv; ++k) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += jac[j * nv + k] * y[j];
        xn[k] -= s;
      }
      std::vector<double> rn;
      if (residual(xn, rn) && sq(rn) < cost) {
        x = std::move(xn);
        r = std::move(rn);
        cost = sq(r);
        lambda = std::max(lambda * 0.3, 1e-15);
        improved = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) break;
  }
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  if (worst > 1e-12) return std::nullopt;
  residual(x, r);
  return cfg.membrane_basis;
}

}  // namespace detail

/// An orthonormal membrane basis whose singleton arguments all sit on the
/// edge of the bound, s_j in {zeta, 1 - zeta}, so that every H_b(s_j) equals
/// H_b(zeta) and the work balance closes at zero. Returns nothing when no
/// assignment of edges is reachable for this layout (for instance when every
/// outcome splits off the same component and d >= 5, since those s_j must sum
/// to tr rho_c = 1).
inline std::optional<std::vector<StateVector>> saturating_basis(int d, const MembraneLayout& layout,
                                                                std::uint64_t seed = 7, int starts = 6) {
  require_prime(d);
  if (d > 7) throw DomainError("saturating_basis supports d <= 7");
  layout.validate(d);
  const double zeta = mub_pair_bound(d);
  const auto comps = component_states(d);

  std::vector<std::vector<double>> spectra;
  for (const auto& c : comps) spectra.push_back(hermitian_eig(c.matrix()).eigenvalues);

  CycleConfig cfg = CycleConfig::uniform(d, computational_membranes(d), layout);
  std::vector<int> single(d);
  for (int j = 0; j < d; ++j) {
    const auto c = layout.singleton(j);
    if (!c) throw DomainError("saturating_basis needs one merged group and one singleton per outcome");
    single[j] = *c;
  }

  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    // Outcomes in the mask target 1 - zeta, the rest target zeta.
    std::vector<double> targets(d);
    for (int j = 0; j < d; ++j) targets[j] = (mask >> j) & 1u ? 1.0 - zeta : zeta;

    // Ky Fan: m diagonal entries of rho_c in an orthonormal basis sum to a value
    // between the m smallest and the m largest eigenvalues.
    bool feasible = true;
    for (int c = 0; c < d && feasible; ++c) {
      double sum = 0.0;
      int m = 0;
      for (int j = 0; j < d; ++j)
        if (single[j] == c) {
          sum += targets[j];
          ++m;
        }
      if (m == 0) continue;
      const auto& ev = spectra[c];
      double lo = 0.0, hi = 0.0;
      for (int k = 0; k < m; ++k) {
        lo += ev[k];
        hi += ev[d - 1 - k];
      }
      if (sum < lo - 1e-12 || sum > hi + 1e-12) feasible = false;
    }
    if (!feasible) continue;

    for (int s = 0; s < starts; ++s) {
      auto rng = sample_stream(seed, static_cast<std::uint64_t>(mask) * 1000 + s);
      std::normal_distribution<double> g(0.0, 1.0);
      std::vector<double> x(2 * d * d);
      for (double& v : x) v = g(rng);
      if (auto basis = detail::solve_targets(cfg, targets, std::move(x))) return basis;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Random scan

struct ScanOptions {
  std::string layout = "paper";  // paper | symmetric
  bool keep_samples = false;
  int bins = 20;
};

struct ScanReport {
  std::uint64_t seed = 0;
  int d = 0;
  int n_samples = 0;
  std::string layout;
  double zeta = 0.0;
  double min_delta_w = 0.0;
  double max_delta_w = 0.0;
  double mean_delta_w = 0.0;
  double histogram_lo = 0.0;
  double histogram_hi = 0.0;
  std::vector<int> histogram;
  double max_consistency_residual = 0.0;
  double max_singleton_arg = 0.0;
  int bound_violations = 0;  // samples with some s_j > zeta + 1e-10
  int in_window = 0;         // samples with every s_j in [1 - zeta, zeta]
  double in_window_max_delta_w = -std::numeric_limits<double>::infinity();
  std::vector<int> out_of_window;  // sample indices
  int out_of_window_positive = 0;  // of those, how many have delta_w > 1e-9
  std::vector<double> delta_w;     // per sample, when requested
  std::vector<double> residuals;   // per sample, when requested
};

inline MembraneLayout layout_by_name(const std::string& name, int d) {
  if (name == "paper") return MembraneLayout::paper(d);
  if (name == "symmetric") return MembraneLayout::symmetric(d);
  throw DomainError("layout must be 'paper' or 'symmetric', got '" + name + "'");
}

/// Samples n Haar-random membrane bases. Sample i draws from its own stream
/// derived from (seed, i), so the report does not depend on evaluation order.
inline ScanReport scan_bases(int d, int n_samples, std::uint64_t seed, const ScanOptions& opt = {}) {
  require_prime(d);
  if (n_samples < 1) throw DomainError("scan_bases needs n_samples >= 1");
  if (opt.bins < 1) throw DomainError("scan_bases needs at least one histogram bin");
  const auto comps = component_states(d);
  const MembraneLayout layout = layout_by_name(opt.layout, d);

  ScanReport rep;
  rep.seed = seed;
  rep.d = d;
  rep.n_samples = n_samples;
  rep.layout = layout.name;
  rep.zeta = mub_pair_bound(d);

  std::vector<double> dws(n_samples);
  std::vector<double> res(n_samples);
  double sum = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    auto rng = sample_stream(seed, static_cast<std::uint64_t>(i));
    const auto cfg = CycleConfig::uniform(d, random_basis(d, rng), layout);
    const WorkReport w = delta_w(cfg, comps);
    dws[i] = w.delta_w;
    res[i] = *w.consistency_residual;
    sum += w.delta_w;
    rep.max_consistency_residual = std::max(rep.max_consistency_residual, res[i]);
    for (double s : w.singleton_args) rep.max_singleton_arg = std::max(rep.max_singleton_arg, s);
    if (!w.bound_respected) ++rep.bound_violations;
    if (w.in_window) {
      ++rep.in_window;
      rep.in_window_max_delta_w = std::max(rep.in_window_max_delta_w, w.delta_w);
    } else {
      rep.out_of_window.push_back(i);
      if (w.delta_w > 1e-9) ++rep.out_of_window_positive;
    }
  }
  rep.min_delta_w = *std::min_element(dws.begin(), dws.end());
  rep.max_delta_w = *std::max_element(dws.begin(), dws.end());
  rep.mean_delta_w = sum / n_samples;
  rep.histogram_lo = rep.min_delta_w;
  rep.histogram_hi = rep.max_delta_w;
  rep.histogram.assign(opt.bins, 0);
  const double width = (rep.histogram_hi - rep.histogram_lo) / opt.bins;
  for (double v : dws) {
    int b = width > 0.0 ? static_cast<int>((v - rep.histogram_lo) / width) : 0;
    rep.histogram[std::clamp(b, 0, opt.bins - 1)]++;
  }
  if (opt.keep_samples) {
    rep.delta_w = std::move(dws);
    rep.residuals = std::move(res);
  }
  return rep;
}

}  // namespace fgur
