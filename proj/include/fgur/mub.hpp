#pragma once

// Complete sets of mutually unbiased bases in odd prime dimension d:
//
//   |j^(k)> = d^{-1/2} sum_l w^{k l^2 - 2 j l} |l>,   w = exp(2 pi i / d),
//
// for k = 0..d-1, plus the computational (generalized-Z eigen) basis.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fgur/numerics.hpp"

namespace fgur {

/// Basis label: kComputational for the Z eigenbasis, otherwise k in [0, d).
using BasisLabel = int;
inline constexpr BasisLabel kComputational = -1;

inline std::string basis_label_name(BasisLabel k) { return k == kComputational ? std::string("Z") : std::to_string(k); }

inline void require_odd_prime(int d) {
  if (d == 2)
    throw DomainError("d must be an odd prime; for d = 2 use the Pauli eigenbases from qubit_geometry.hpp");
  if (d < 3 || d > 64 || !is_prime(d)) throw DomainError(detail::concat("d must be an odd prime (<= 64), got ", d));
}

/// w^m with m reduced modulo d before evaluating the angle.
inline cplx root_of_unity(int d, long long m) {
  long long r = m % d;
  if (r < 0) r += d;
  const double angle = 2.0 * kPi * static_cast<double>(r) / static_cast<double>(d);
  return {std::cos(angle), std::sin(angle)};
}

inline std::vector<StateVector> computational_basis(int d) {
  require_odd_prime(d);
  std::vector<StateVector> basis;
  basis.reserve(d);
  for (int j = 0; j < d; ++j) basis.push_back(StateVector::basis(d, j));
  return basis;
}

/// Generalized Pauli Z = diag(w^j).
inline ComplexMatrix generalized_z(int d) {
  require_odd_prime(d);
  ComplexMatrix z(d);
  for (int j = 0; j < d; ++j) z(j, j) = root_of_unity(d, j);
  return z;
}

inline StateVector mub_vector(int d, int k, int j) {
  require_odd_prime(d);
  if (k < 0 || k >= d) throw DomainError(detail::concat("basis index k = ", k, " out of range [0, ", d, ")"));
  if (j < 0 || j >= d) throw DomainError(detail::concat("outcome index j = ", j, " out of range [0, ", d, ")"));
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  StateVector v(d);
  for (int l = 0; l < d; ++l) {
    const long long exponent = static_cast<long long>(k) * l * l - 2LL * j * l;
    v[l] = amp * root_of_unity(d, exponent);
  }
  return v;
}

struct MubFamily {
  int d = 0;
  // bases[0] is the computational basis, bases[k + 1] is the k-th Fourier-type basis.
  std::vector<std::vector<StateVector>> bases;

  static std::size_t slot(BasisLabel k) { return static_cast<std::size_t>(k + 1); }

  const std::vector<StateVector>& basis(BasisLabel k) const {
    if (k < kComputational || k >= d) throw DomainError(detail::concat("basis label ", k, " out of range for d = ", d));
    return bases[slot(k)];
  }
  const StateVector& vector(BasisLabel k, int j) const {
    const auto& b = basis(k);
    if (j < 0 || j >= d) throw DomainError(detail::concat("outcome index ", j, " out of range for d = ", d));
    return b[static_cast<std::size_t>(j)];
  }
};

inline MubFamily mub_family(int d) {
  require_odd_prime(d);
  MubFamily f;
  f.d = d;
  f.bases.reserve(d + 1);
  f.bases.push_back(computational_basis(d));
  for (int k = 0; k < d; ++k) {
    std::vector<StateVector> b;
    b.reserve(d);
    for (int j = 0; j < d; ++j) b.push_back(mub_vector(d, k, j));
    f.bases.push_back(std::move(b));
  }
  return f;
}

struct MubOffender {
  std::size_t basis_a = 0;  // slot index into MubFamily::bases
  std::size_t vector_a = 0;
  std::size_t basis_b = 0;
  std::size_t vector_b = 0;
  double deviation = 0.0;
};

struct MubVerification {
  double max_orthonormality_deviation = 0.0;
  double max_overlap_deviation = 0.0;  // max | |<a|b>|^2 - 1/d |
  double tolerance = 0.0;
  bool pass = false;
  std::optional<MubOffender> worst_orthonormality;
  std::optional<MubOffender> worst_overlap;
};

inline MubVerification verify_mub(const MubFamily& f, double tol) {
  MubVerification rep;
  rep.tolerance = tol;
  const double inv_d = 1.0 / static_cast<double>(f.d);
  for (std::size_t a = 0; a < f.bases.size(); ++a) {
    const auto& ba = f.bases[a];
    for (std::size_t i = 0; i < ba.size(); ++i) {
      for (std::size_t i2 = i; i2 < ba.size(); ++i2) {
        const double dev = std::abs(inner(ba[i], ba[i2]) - (i == i2 ? 1.0 : 0.0));
        if (!rep.worst_orthonormality || dev > rep.worst_orthonormality->deviation) {
          rep.worst_orthonormality = MubOffender{a, i, a, i2, dev};
        }
      }
      for (std::size_t b = a + 1; b < f.bases.size(); ++b) {
        const auto& bb = f.bases[b];
        for (std::size_t j = 0; j < bb.size(); ++j) {
          const double dev = std::abs(std::norm(inner(ba[i], bb[j])) - inv_d);
          if (!rep.worst_overlap || dev > rep.worst_overlap->deviation) {
            rep.worst_overlap = MubOffender{a, i, b, j, dev};
          }
        }
      }
    }
  }
  if (rep.worst_orthonormality) rep.max_orthonormality_deviation = rep.worst_orthonormality->deviation;
  if (rep.worst_overlap) rep.max_overlap_deviation = rep.worst_overlap->deviation;
  rep.pass = rep.max_orthonormality_deviation <= tol && rep.max_overlap_deviation <= tol;
  return rep;
}

}  // namespace fgur
