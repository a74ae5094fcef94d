#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fgur/finegrained.hpp"
#include "oracles.hpp"

using namespace fgur;

namespace {

MeasurementEnsemble xz_pair() { return pauli_ensemble({{PauliAxis::X, 0}, {PauliAxis::Z, 0}}); }

MeasurementEnsemble random_ensemble(std::size_t dim, int terms, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(terms);
  double sum = 0.0;
  for (double& x : w) sum += (x = u(rng));
  std::vector<EnsembleTerm> out;
  for (int t = 0; t < terms; ++t) out.push_back({"t" + std::to_string(t), w[t] / sum, projector(oracle::random_state(dim, rng))});
  return MeasurementEnsemble(std::move(out));
}

}  // namespace

TEST(ZetaSpectral, PauliPair) {
  const auto b = zeta_spectral(xz_pair());
  EXPECT_NEAR(b.zeta, 0.5 + 0.5 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(b.zeta, 0.853553, 1e-6);
  EXPECT_TRUE(b.unique);
  const BlochVector k = state_to_bloch(b.maximizer);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_LE(k.distance({h, 0, h}), 1e-9);
  EXPECT_NEAR(b.maximizer[0].real(), std::cos(kPi / 8), 1e-12);
  EXPECT_NEAR(b.maximizer[1].real(), std::sin(kPi / 8), 1e-12);
}

TEST(ZetaSpectral, MubPairsAcrossPrimes) {
  for (int d : {2, 3, 5, 7, 11, 13}) {
    const auto b = zeta_spectral(mub_pair_ensemble(d, kComputational, 0, 0, 0));
    EXPECT_NEAR(b.zeta, 0.5 + 0.5 / std::sqrt(double(d)), 1e-10) << d;
    EXPECT_NEAR(b.zeta, mub_pair_bound(d), 1e-10);
  }
  EXPECT_NEAR(mub_pair_bound(3), 0.788675, 1e-6);
  EXPECT_NEAR(mub_pair_bound(5), 0.7236067977499789, 1e-15);
  EXPECT_NEAR(mub_pair_bound(7), 0.6889822365046137, 1e-15);
}

TEST(ZetaSpectral, TripleAveragedPauliSum) {
  const auto ens = pauli_ensemble({{PauliAxis::X, 0}, {PauliAxis::Y, 0}, {PauliAxis::Z, 0}});
  EXPECT_NEAR(zeta_spectral(ens).zeta, 0.5 + 0.5 / std::sqrt(3.0), 1e-12);
}

TEST(ZetaSpectral, MaximizerAttainsBound) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ens = random_ensemble(2 + trial % 5, 2 + trial % 3, rng);
    const auto b = zeta_spectral(ens);
    EXPECT_NEAR(lhs_value(ens, b.maximizer), b.zeta, 1e-10);
    // no random state beats it
    for (int s = 0; s < 20; ++s) EXPECT_LE(lhs_value(ens, oracle::random_state(ens.dim(), rng)), b.zeta + 1e-12);
  }
}

TEST(LhsValue, Examples) {
  EXPECT_NEAR(lhs_value(xz_pair(), StateVector{1.0, 0.0}), 0.75, 1e-15);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(lhs_value(xz_pair(), StateVector{h, h}), 0.75, 1e-15);
  EXPECT_THROW(lhs_value(xz_pair(), StateVector{1.0, 1.0}), DomainError);
  EXPECT_THROW(lhs_value(xz_pair(), StateVector{1.0, 0.0, 0.0}), DomainError);
}

TEST(LhsValue, SaturatingStateInDimensionThree) {
  const double x0 = kPi / 4 - 0.5 * std::asin(1.0 / std::sqrt(3.0));
  const StateVector psi = hyperspherical_state({{x0, kPi / 4}, {0.0, 0.0}});
  const auto ens = mub_pair_ensemble(3, kComputational, 0, 0, 0);
  EXPECT_NEAR(lhs_value(ens, psi), 0.5 + 0.5 / std::sqrt(3.0), 1e-9);
  const double pz = std::norm(inner(mub_outcome(3, kComputational, 0), psi));
  const double p0 = std::norm(inner(mub_outcome(3, 0, 0), psi));
  EXPECT_NEAR(pz, p0, 1e-9);
}

TEST(CertaintyOperator, PairClosedForm) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 2 + trial % 6;
    const StateVector u = oracle::random_state(d, rng);
    const StateVector v = oracle::random_state(d, rng);
    const auto ens = MeasurementEnsemble::uniform({{"u", u}, {"v", v}});
    EXPECT_NEAR(zeta_spectral(ens).zeta, 0.5 + 0.5 * std::abs(inner(u, v)), 1e-10);
  }
}

TEST(CertaintyOperator, ZeroWeightTermChangesNothing) {
  const StateVector zero = StateVector::basis(2, 0);
  const double h = 1.0 / std::sqrt(2.0);
  const StateVector plus{h, h};
  const MeasurementEnsemble with_zero({{"0", 0.5, projector(zero)}, {"+", 0.5, projector(plus)}, {"1", 0.0, projector(StateVector::basis(2, 1))}});
  EXPECT_NEAR(zeta_spectral(with_zero).zeta, zeta_spectral(xz_pair()).zeta, 1e-14);
}

TEST(MeasurementEnsemble, Rejections) {
  const auto p2 = projector(StateVector::basis(2, 0));
  const auto p3 = projector(StateVector::basis(3, 0));
  EXPECT_THROW(MeasurementEnsemble({{"a", 0.5, p2}, {"b", 0.5, p3}}), DomainError);
  EXPECT_THROW(MeasurementEnsemble({{"a", 0.7, p2}, {"b", 0.5, p2}}), DomainError);
  EXPECT_THROW(MeasurementEnsemble({{"a", 1.5, p2}, {"b", -0.5, p2}}), DomainError);
  EXPECT_THROW(MeasurementEnsemble({{"a", 1.0, DensityMatrix::maximally_mixed(2)}}), DomainError);
  EXPECT_THROW(MeasurementEnsemble(std::vector<EnsembleTerm>{}), DomainError);
}

TEST(MubPairs, Rejections) {
  EXPECT_THROW(mub_pair_ensemble(4, kComputational, 0, 0, 0), DomainError);
  EXPECT_THROW(mub_pair_ensemble(3, 0, 0, 0, 1), DomainError);
  EXPECT_THROW(all_outcome_pairs_bound(5, 1, 0, 1, 2), DomainError);
  EXPECT_THROW(mub_outcome(3, kComputational, 3), DomainError);
  EXPECT_THROW(mub_outcome(2, 2, 0), DomainError);
}

TEST(MubPairs, EveryCrossBasisOutcomePairSharesTheBound) {
  for (int d : {3, 5}) {
    double worst = 0.0;
    for (int k1 = kComputational; k1 < d; ++k1)
      for (int k2 = k1 + 1; k2 < d; ++k2)
        for (int j1 = 0; j1 < d; ++j1)
          for (int j2 = 0; j2 < d; ++j2)
            worst = std::max(worst, std::abs(all_outcome_pairs_bound(d, k1, j1, k2, j2) - mub_pair_bound(d)));
    EXPECT_LE(worst, 1e-10) << d;
  }
}

TEST(HypersphericalState, NormalizedAndCoversBasisVectors) {
  EXPECT_EQ(hyperspherical_state({{0.0, 0.0}, {0.0, 0.0}}), (StateVector{1.0, 0.0, 0.0}));
  const StateVector last = hyperspherical_state({{kPi / 2, kPi / 2}, {0.0, 0.0}});
  EXPECT_NEAR(std::abs(last[2]), 1.0, 1e-15);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int i = 0; i < 50; ++i) {
    const StateVector v = hyperspherical_state({{u(rng) / 4, u(rng) / 4, u(rng) / 4}, {u(rng), u(rng), u(rng)}});
    EXPECT_NEAR(v.norm(), 1.0, 1e-14);
  }
  EXPECT_THROW(hyperspherical_state({{0.0}, {0.0, 0.0}}), DomainError);
}

TEST(GridSearch, QubitPairAgreesWithSpectral) {
  const auto ens = xz_pair();
  const auto g = zeta_gridsearch(ens, 721);
  const double z = zeta_spectral(ens).zeta;
  EXPECT_LE(g.zeta, z + 1e-12);
  EXPECT_NEAR(g.zeta, z, 1e-5);
  EXPECT_NEAR(lhs_value(ens, g.maximizer), g.zeta, 1e-12);
}

TEST(GridSearch, QutritPairAgreesWithSpectral) {
  const auto ens = mub_pair_ensemble(3, kComputational, 0, 0, 0);
  const auto g = zeta_gridsearch(ens, 60);
  const double z = zeta_spectral(ens).zeta;
  EXPECT_LE(g.zeta, z + 1e-12);
  EXPECT_NEAR(g.zeta, z, 2e-3);
}

TEST(GridSearch, RealPlaneIsEnoughForRealEnsembles) {
  GridOptions opt;
  opt.steps_per_angle = 361;
  opt.real_plane = true;
  const auto g = zeta_gridsearch(xz_pair(), opt);
  EXPECT_NEAR(g.zeta, 0.5 + 0.5 / std::sqrt(2.0), 1e-5);
  EXPECT_EQ(g.evaluations, 361u);
}

TEST(GridSearch, NeverExceedsSpectralOnRandomEnsembles) {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 2 + trial % 2;
    const auto ens = random_ensemble(dim, 2 + trial % 3, rng);
    const auto g = zeta_gridsearch(ens, dim == 2 ? 60 : 16);
    const double z = zeta_spectral(ens).zeta;
    EXPECT_LE(g.zeta, z + 1e-12);
    EXPECT_GE(g.zeta, z - 0.05);
  }
}

TEST(GridSearch, Deterministic) {
  const auto ens = mub_pair_ensemble(3, kComputational, 1, 2, 0);
  const auto a = zeta_gridsearch(ens, 20);
  const auto b = zeta_gridsearch(ens, 20);
  EXPECT_EQ(a.zeta, b.zeta);
  EXPECT_EQ(a.angles.x, b.angles.x);
  EXPECT_EQ(a.angles.phi, b.angles.phi);
}

TEST(GridSearch, Rejections) {
  EXPECT_THROW(zeta_gridsearch(mub_pair_ensemble(7, kComputational, 0, 0, 0), 20), DomainError);
  EXPECT_THROW(zeta_gridsearch(xz_pair(), 4), DomainError);
}
