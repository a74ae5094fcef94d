#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fgur/finegrained.hpp"
#include "fgur/qubit_geometry.hpp"
#include "oracles.hpp"

using namespace fgur;

namespace {

BlochVector random_bloch(std::mt19937_64& rng) {
  const auto v = oracle::random_direction(rng);
  return {v[0], v[1], v[2]};
}

double state_distance(const StateVector& a, const StateVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST(BlochToState, Examples) {
  EXPECT_LE(state_distance(bloch_to_state({0, 0, 1}), StateVector{1.0, 0.0}), 1e-15);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_LE(state_distance(bloch_to_state({1, 0, 0}), StateVector{h, h}), 1e-15);
  const StateVector bis = bloch_to_state({h, 0, h});
  EXPECT_NEAR(bis[0].real(), std::cos(kPi / 8), 1e-15);
  EXPECT_NEAR(bis[1].real(), std::sin(kPi / 8), 1e-15);
  EXPECT_NEAR(bis[0].real(), 0.923880, 1e-6);
  EXPECT_NEAR(bis[1].real(), 0.382683, 1e-6);
  EXPECT_LE(state_distance(bloch_to_state({0, 0, -1}), StateVector{0.0, 1.0}), 1e-15);
}

TEST(BlochToState, IsPlusOneEigenvector) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const BlochVector k = random_bloch(rng);
    const StateVector psi = bloch_to_state(k);
    const ComplexMatrix sk{{cplx(k.z), cplx(k.x, -k.y)}, {cplx(k.x, k.y), cplx(-k.z)}};
    EXPECT_LE(state_distance(sk * psi, psi), 1e-12);
    EXPECT_GE(psi[0].real(), 0.0);
    EXPECT_EQ(psi[0].imag(), 0.0);
  }
}

TEST(BlochToState, RejectsNonUnit) { EXPECT_THROW(bloch_to_state({1, 1, 0}), DomainError); }

TEST(StateToBloch, Examples) {
  const BlochVector z = state_to_bloch(StateVector{1.0, 0.0});
  EXPECT_NEAR(z.distance({0, 0, 1}), 0.0, 1e-15);
  const BlochVector b = state_to_bloch(angles_to_state({kPi / 4, 0.0}));
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(b.distance({h, 0, h}), 0.0, 1e-15);
  EXPECT_THROW(state_to_bloch(StateVector{1.0, 0.0, 0.0}), DomainError);
}

TEST(StateToBloch, RoundTripUpToGlobalPhase) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const StateVector psi = oracle::random_state(2, rng);
    const StateVector back = bloch_to_state(state_to_bloch(psi));
    EXPECT_NEAR(std::abs(inner(back, psi)), 1.0, 1e-10);
    const BlochVector k = random_bloch(rng);
    EXPECT_LE(state_to_bloch(bloch_to_state(k)).distance(k), 1e-10);
  }
}

TEST(SpinUpProbability, Examples) {
  const BlochVector x{1, 0, 0}, z{0, 0, 1};
  EXPECT_DOUBLE_EQ(spin_up_probability(z, z), 1.0);
  EXPECT_DOUBLE_EQ(spin_up_probability(-z, z), 0.0);
  EXPECT_DOUBLE_EQ(spin_up_probability(x, z), 0.5);
}

TEST(SpinUpProbability, EqualsSquaredOverlap) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    const BlochVector m = random_bloch(rng), k = random_bloch(rng);
    const double p = spin_up_probability(m, k);
    EXPECT_NEAR(p, std::norm(inner(bloch_to_state(m), bloch_to_state(k))), 1e-10);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST(PairBound, Examples) {
  EXPECT_NEAR(pair_bound(kPi / 2), 1.0 + 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(pair_bound(kPi / 2) / 2.0, 0.5 + 0.5 / std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(pair_bound(0.0), 2.0);
  EXPECT_NEAR(pair_bound(2.0 * kPi / 3.0), 1.5, 1e-15);
  EXPECT_THROW(pair_bound(-0.1), DomainError);
  EXPECT_THROW(pair_bound(4.0), DomainError);
}

TEST(PairBound, HundredTwentyDegreesBySpectrum) {
  const BlochVector m{0, 0, 1};
  const BlochVector n{std::sin(2 * kPi / 3), 0, std::cos(2 * kPi / 3)};
  const auto top = oracle::eig2(spin_projector(m) + spin_projector(n))[1];
  EXPECT_NEAR(top, 1.5, 1e-12);
}

TEST(PairBound, AntiparallelHasNoUniqueMaximizer) {
  const auto pb = pair_bound(BlochVector{0, 0, 1}, BlochVector{0, 0, -1});
  EXPECT_NEAR(pb.value, 1.0, 1e-15);
  EXPECT_FALSE(pb.maximizer.has_value());
}

TEST(PairBound, RandomDirectionsMatchSpectrumAndBisector) {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 1000; ++i) {
    const BlochVector m = random_bloch(rng), n = random_bloch(rng);
    const auto pb = pair_bound(m, n);
    const auto ev = oracle::eig2(spin_projector(m) + spin_projector(n));
    EXPECT_NEAR(ev[1], 1.0 + std::cos(pb.gamma / 2.0), 1e-9);
    if (pb.gamma <= kPi - 1e-3) {
      ASSERT_TRUE(pb.maximizer.has_value());
      const auto eig = hermitian_eig(spin_projector(m) + spin_projector(n));
      const BlochVector top = state_to_bloch(eig.eigenvectors.back());
      EXPECT_LE(top.distance(*pb.maximizer), 1e-8);
      // the bisector state attains the bound
      EXPECT_NEAR(spin_up_probability(m, *pb.maximizer) + spin_up_probability(n, *pb.maximizer), pb.value, 1e-12);
    }
  }
}

TEST(PairBound, QuarterTurnIsTwiceTheXZPairBound) {
  EXPECT_NEAR(pair_bound(kPi / 2) / 2.0, mub_pair_bound(2), 1e-12);
}

TEST(AverageCertainty, Examples) {
  const auto a0 = average_certainty(0.0);
  EXPECT_NEAR(a0.closed_form, 1.0, 1e-15);
  EXPECT_NEAR(a0.quadrature, 1.0, 1e-8);
  const auto a1 = average_certainty(kPi / 2);
  EXPECT_NEAR(a1.closed_form, 1.0 + 1.0 / kPi, 1e-15);
  EXPECT_NEAR(a1.closed_form, 1.318310, 1e-6);
  EXPECT_THROW(average_certainty(-0.1), DomainError);
  EXPECT_THROW(average_certainty(1.0, 100), DomainError);
}

TEST(AverageCertainty, QuadratureAgreesOnFineGrid) {
  for (int i = 0; i <= 1000; ++i) {
    const auto a = average_certainty(kPi * i / 1000.0);
    EXPECT_NEAR(a.closed_form, a.quadrature, 1e-8) << a.alpha;
  }
}

TEST(AverageCertainty, OptimalAngleIsQuarterTurn) {
  const double step = 1e-3;
  EXPECT_NEAR(optimal_measurement_angle(step), kPi / 2, step);
}

TEST(TriplePauli, BoundAndMaximizer) {
  const auto t = triple_pauli_bound();
  EXPECT_NEAR(t.zeta, 0.5 + 0.5 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(t.zeta, 0.788675, 1e-6);
  EXPECT_LE(t.spectral_residual, 1e-12);
  const double s = 1.0 / std::sqrt(3.0);
  EXPECT_LE(t.maximizer_bloch.distance({s, s, s}), 1e-10);
  EXPECT_NEAR(t.maximizer.theta, std::asin(std::sqrt(2.0 / 3.0)), 1e-12);
  EXPECT_NEAR(t.maximizer.phi, kPi / 4, 1e-12);
}

TEST(TriplePauli, LhsAtMaximizer) {
  const auto t = triple_pauli_bound();
  const BlochVector k = angles_to_bloch(t.maximizer);
  const double lhs = (spin_up_probability({1, 0, 0}, k) + spin_up_probability({0, 1, 0}, k) +
                      spin_up_probability({0, 0, 1}, k)) / 3.0;
  EXPECT_NEAR(lhs, t.zeta, 1e-10);
}

TEST(TriplePauli, EveryOutcomeTripleSharesTheBound) {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const auto t = triple_pauli_bound({a, b, c});
        EXPECT_NEAR(t.spectral_zeta, t.zeta, 1e-10);
        EXPECT_NEAR(t.maximizer_bloch.norm(), 1.0, 1e-12);
      }
}

TEST(PauliEigenstates, EigenvaluesAndUnbiasedness) {
  for (auto axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z})
    for (int o = 0; o < 2; ++o) {
      const BlochVector dir = state_to_bloch(pauli_eigenstate(axis, o));
      EXPECT_LE(dir.distance(pauli_outcome_direction(axis, o)), 1e-15);
    }
  EXPECT_NEAR(std::norm(inner(pauli_eigenstate(PauliAxis::X, 0), pauli_eigenstate(PauliAxis::Y, 1))), 0.5, 1e-15);
  EXPECT_THROW(pauli_eigenstate(PauliAxis::X, 2), DomainError);
}
