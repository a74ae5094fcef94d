#pragma once

// Bloch-sphere treatment of qubit measurements.

#include <array>
#include <cmath>
#include <optional>

#include "fgur/numerics.hpp"

namespace fgur {

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator-() const { return {-x, -y, -z}; }
  BlochVector scaled(double s) const { return {s * x, s * y, s * z}; }
  double distance(const BlochVector& o) const { return std::sqrt(std::pow(x - o.x, 2) + std::pow(y - o.y, 2) + std::pow(z - o.z, 2)); }
};

/// |psi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
struct QubitAngles {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi)
};

inline void require_unit(const BlochVector& k, double tol = 1e-10) {
  const double n = k.norm();
  if (!(std::abs(n - 1.0) <= tol)) throw DomainError(detail::concat("Bloch vector not unit length: |k| = ", n));
}

/// +1 eigenvector of sigma.k, with the first nonzero amplitude real and nonnegative.
inline StateVector bloch_to_state(const BlochVector& k) {
  require_unit(k);
  const double n = k.norm();
  const double x = k.x / n, y = k.y / n, z = k.z / n;
  if (z >= 0.0) {
    const double s = std::sqrt(2.0 * (1.0 + z));
    return StateVector{cplx(1.0 + z, 0.0) / s, cplx(x, y) / s};
  }
  // Southern hemisphere: build from (x - iy, 1 - z) and rotate the phase away.
  const double s = std::sqrt(2.0 * (1.0 - z));
  const double rho = std::hypot(x, y);
  if (rho == 0.0) return StateVector{cplx(0.0, 0.0), cplx(1.0, 0.0)};
  const cplx ph = cplx(x, y) / rho;
  return StateVector{cplx(rho, 0.0) / s, (1.0 - z) * ph / s};
}

inline BlochVector state_to_bloch(const StateVector& psi) {
  if (psi.dim() != 2) throw DomainError(detail::concat("state_to_bloch needs a qubit state, got dim ", psi.dim()));
  require_normalized(psi);
  const cplx ab = std::conj(psi[0]) * psi[1];
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(psi[0]) - std::norm(psi[1])};
}

inline StateVector angles_to_state(const QubitAngles& a) {
  return StateVector{cplx(std::cos(a.theta / 2.0), 0.0), std::polar(std::sin(a.theta / 2.0), a.phi)};
}

inline BlochVector angles_to_bloch(const QubitAngles& a) {
  return {std::sin(a.theta) * std::cos(a.phi), std::sin(a.theta) * std::sin(a.phi), std::cos(a.theta)};
}

inline QubitAngles bloch_to_angles(const BlochVector& k) {
  require_unit(k);
  double phi = std::atan2(k.y, k.x);
  if (phi < 0.0) phi += 2.0 * kPi;
  return {std::acos(std::clamp(k.z, -1.0, 1.0)), phi};
}

/// |<m_up|k_up>|^2 = (1 + m.k) / 2
inline double spin_up_probability(const BlochVector& m, const BlochVector& k) {
  require_unit(m);
  require_unit(k);
  return std::clamp(0.5 * (1.0 + m.dot(k)), 0.0, 1.0);
}

/// (1 + sigma.m) / 2
inline ComplexMatrix spin_projector(const BlochVector& m) {
  require_unit(m);
  return ComplexMatrix{{cplx(0.5 * (1.0 + m.z)), cplx(0.5 * m.x, -0.5 * m.y)},
                       {cplx(0.5 * m.x, 0.5 * m.y), cplx(0.5 * (1.0 - m.z))}};
}

// ---------------------------------------------------------------------------
// Pauli eigenbases. Outcome 0 is the +1 eigenvector: |0>, |+>, |~+>.

enum class PauliAxis { X, Y, Z };

inline BlochVector axis_vector(PauliAxis a) {
  switch (a) {
    case PauliAxis::X: return {1.0, 0.0, 0.0};
    case PauliAxis::Y: return {0.0, 1.0, 0.0};
    case PauliAxis::Z: return {0.0, 0.0, 1.0};
  }
  return {};
}

inline char axis_name(PauliAxis a) { return a == PauliAxis::X ? 'x' : a == PauliAxis::Y ? 'y' : 'z'; }

inline PauliAxis parse_axis(char c) {
  switch (c) {
    case 'x': case 'X': return PauliAxis::X;
    case 'y': case 'Y': return PauliAxis::Y;
    case 'z': case 'Z': return PauliAxis::Z;
    default: throw DomainError(detail::concat("unknown Pauli axis '", c, "'"));
  }
}

inline StateVector pauli_eigenstate(PauliAxis axis, int outcome) {
  if (outcome != 0 && outcome != 1) throw DomainError(detail::concat("qubit outcome must be 0 or 1, got ", outcome));
  const double h = 1.0 / std::sqrt(2.0);
  const double sign = outcome == 0 ? 1.0 : -1.0;
  switch (axis) {
    case PauliAxis::X: return StateVector{cplx(h), cplx(sign * h)};
    case PauliAxis::Y: return StateVector{cplx(h), cplx(0.0, sign * h)};
    case PauliAxis::Z: return StateVector::basis(2, static_cast<std::size_t>(outcome));
  }
  return {};
}

inline BlochVector pauli_outcome_direction(PauliAxis axis, int outcome) {
  const BlochVector a = axis_vector(axis);
  return outcome == 0 ? a : -a;
}

// ---------------------------------------------------------------------------
// Two-direction bound

/// 1 + cos(gamma/2), the maximum over Bloch vectors k of p(m_up) + p(n_up)
/// for directions at angle gamma. Evaluated continuously on [0, pi].
inline double pair_bound(double gamma) {
  if (!(gamma >= 0.0 && gamma <= kPi)) throw DomainError(detail::concat("gamma = ", gamma, " outside [0, pi]"));
  return 1.0 + std::cos(gamma / 2.0);
}

struct PairBound {
  double gamma = 0.0;
  double value = 0.0;
  std::optional<BlochVector> maximizer;  // empty when m = -n (degenerate top eigenvalue)
};

inline PairBound pair_bound(const BlochVector& m, const BlochVector& n) {
  require_unit(m);
  require_unit(n);
  PairBound out;
  out.gamma = std::acos(std::clamp(m.dot(n), -1.0, 1.0));
  out.value = pair_bound(out.gamma);
  const BlochVector sum = m + n;
  const double len = sum.norm();
  if (len > 1e-12) out.maximizer = sum.scaled(1.0 / len);
  return out;
}

// ---------------------------------------------------------------------------
// Average certainty over the x-z semi-plane

struct AverageCertainty {
  double alpha = 0.0;
  double closed_form = 0.0;  // 1 + sin(alpha)/pi
  double quadrature = 0.0;   // composite Simpson
  int panels = 0;
};

/// (1/pi) int_0^pi [cos^2(theta/2) + cos^2((theta - alpha)/2)] dtheta, with
/// states uniform in theta on the phi = 0 semicircle.
inline AverageCertainty average_certainty(double alpha, int panels = 1024) {
  if (!(alpha >= 0.0 && alpha <= kPi)) throw DomainError(detail::concat("alpha = ", alpha, " outside [0, pi]"));
  if (panels < 1024 || panels % 2 != 0) throw DomainError("average_certainty needs an even panel count >= 1024");
  auto integrand = [alpha](double theta) {
    const double pz = std::pow(std::cos(theta / 2.0), 2);
    const double pn = std::pow(std::cos((theta - alpha) / 2.0), 2);
    return (pz + pn) / kPi;
  };
  const double h = kPi / panels;
  double acc = integrand(0.0) + integrand(kPi);
  for (int i = 1; i < panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * h);
  AverageCertainty out;
  out.alpha = alpha;
  out.closed_form = 1.0 + std::sin(alpha) / kPi;
  out.quadrature = acc * h / 3.0;
  out.panels = panels;
  return out;
}

/// Grid argmax of the closed form over alpha in [0, pi].
inline double optimal_measurement_angle(double step) {
  if (!(step > 0.0)) throw DomainError("step must be positive");
  double best_alpha = 0.0;
  double best = -1.0;
  for (int i = 0;; ++i) {
    const double a = i * step;
    if (a > kPi) break;
    const double v = 1.0 + std::sin(a) / kPi;
    if (v > best) {
      best = v;
      best_alpha = a;
    }
  }
  return best_alpha;
}

// ---------------------------------------------------------------------------
// Three Pauli measurements with equal weights

struct TriplePauliBound {
  double zeta = 0.0;             // 1/2 + 1/(2 sqrt 3)
  QubitAngles maximizer;         // theta = asin(sqrt(2/3)), phi = pi/4 (outcomes 0,0,0)
  BlochVector maximizer_bloch;   // (1,1,1)/sqrt 3 for outcomes 0,0,0
  double spectral_zeta = 0.0;    // top eigenvalue of the averaged projector sum
  double spectral_residual = 0.0;
};

/// Bound for (1/3)[p(a^(x)) + p(b^(y)) + p(c^(z))]. The closed form holds for
/// every outcome triple; the maximizer is the normalized sum of the outcome
/// directions, i.e. a body diagonal of the cube.
inline TriplePauliBound triple_pauli_bound(std::array<int, 3> outcomes = {0, 0, 0}) {
  TriplePauliBound out;
  out.zeta = 0.5 + 0.5 / std::sqrt(3.0);
  const BlochVector dx = pauli_outcome_direction(PauliAxis::X, outcomes[0]);
  const BlochVector dy = pauli_outcome_direction(PauliAxis::Y, outcomes[1]);
  const BlochVector dz = pauli_outcome_direction(PauliAxis::Z, outcomes[2]);
  out.maximizer_bloch = (dx + dy + dz).scaled(1.0 / std::sqrt(3.0));
  out.maximizer = bloch_to_angles(out.maximizer_bloch);

  ComplexMatrix c = (spin_projector(dx) + spin_projector(dy) + spin_projector(dz)) * cplx(1.0 / 3.0);
  const auto eig = hermitian_eig(c);
  out.spectral_zeta = eig.largest();
  out.spectral_residual = std::abs(out.spectral_zeta - out.zeta);
  return out;
}

}  // namespace fgur
