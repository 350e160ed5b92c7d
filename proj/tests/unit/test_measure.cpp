#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "semistab/errors.hpp"
#include "semistab/measure.hpp"

namespace semistab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(AtomicMeasure, SortsMergesAndTotals) {
  const auto mu = AtomicMeasure::from_pairs({{-2.0, 0.25}, {-0.5, 1.0}, {-2.0, 0.25}, {0.0, 0.5}});
  ASSERT_EQ(mu.size(), 3U);
  EXPECT_TRUE(mu.atoms()[0].distance.is_zero());
  EXPECT_EQ(mu.atoms()[1].position(), -0.5);
  EXPECT_EQ(mu.atoms()[2].weight.to_double(), 0.5);
  EXPECT_EQ(mu.total_mass().to_double(), 2.0);
}

TEST(AtomicMeasure, RejectsInvalidAtoms) {
  EXPECT_THROW((void)AtomicMeasure::from_pairs({{0.5, 1.0}}), InvariantViolation);
  EXPECT_THROW((void)AtomicMeasure::from_pairs({{-1.0, 0.0}}), InvariantViolation);
  EXPECT_THROW((void)AtomicMeasure::from_pairs({{-1.0, -2.0}}), InvariantViolation);
  EXPECT_THROW((void)AtomicMeasure::from_pairs({{std::nan(""), 1.0}}), InvariantViolation);
}

TEST(AtomicMeasure, BallMassIsOpen) {
  const SpectralMeasure mu = AtomicMeasure::from_pairs({{-1.0, 2.0}, {-3.0, 5.0}});
  EXPECT_EQ(ball_mass(mu, 1.0), 0.0);
  EXPECT_EQ(ball_mass(mu, 1.5), 2.0);
  EXPECT_EQ(ball_mass(mu, 10.0), 7.0);
  EXPECT_THROW((void)ball_mass(mu, 0.0), DomainError);
  EXPECT_THROW((void)ball_mass(mu, -1.0), DomainError);
}

TEST(AtomicMeasure, ReweightBySquare) {
  const auto mu = AtomicMeasure::from_pairs({{-1.0, 2.0}, {-3.0, 1.0}});
  const auto u = mu.reweighted_by_square(0.0);
  ASSERT_EQ(u.size(), 2U);
  EXPECT_DOUBLE_EQ(u.atoms()[0].weight.to_double(), 2.0);
  EXPECT_DOUBLE_EQ(u.atoms()[1].weight.to_double(), 9.0);
  // Shift by a = 1 removes the atom at -1.
  const auto shifted = mu.reweighted_by_square(1.0);
  ASSERT_EQ(shifted.size(), 1U);
  EXPECT_DOUBLE_EQ(shifted.atoms()[0].weight.to_double(), 4.0);
  EXPECT_THROW((void)mu.reweighted_by_square(2.0), DomainError);
}

class FDeltaBallMass : public ::testing::TestWithParam<double> {};

TEST_P(FDeltaBallMass, ClosedFormMatchesIndependentQuadrature) {
  const double delta = GetParam();
  const SpectralMeasure mu = DensityMeasure::f_delta(delta);
  std::mt19937_64 rng(static_cast<std::uint64_t>(delta * 1000));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double eps = 1.0 - u(rng);
    const double want = oracle::integrate([&](double s) { return std::pow(s, 2 * delta); }, 0.0, eps);
    EXPECT_LE(oracle::relative_error(ball_mass(mu, eps), want), 1e-10) << "eps=" << eps;
  }
}

INSTANTIATE_TEST_SUITE_P(Deltas, FDeltaBallMass, ::testing::Values(0.6, 0.75, 0.9));

TEST(DensityMeasure, GenericDensityUsesQuadrature) {
  const SpectralMeasure generic = DensityMeasure(0.0, 1.0, [](double s) { return std::pow(s, 1.5); });
  for (const double eps : {1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0}) {
    const double want = std::pow(std::min(eps, 1.0), 2.5) / 2.5;
    EXPECT_LE(oracle::relative_error(ball_mass(generic, eps), want), 1e-10) << "eps=" << eps;
  }
}

TEST(DensityMeasure, ClosedFormIsValidatedAgainstQuadrature) {
  const auto wrong = [](double log_eps) { return 2.0 * log_eps; };
  EXPECT_THROW(DensityMeasure(0.0, 1.0, [](double) { return 1.0; }, wrong), InvariantViolation);
}

TEST(DensityMeasure, RejectsNegativeDensityAndBadSupport) {
  EXPECT_THROW(DensityMeasure(0.0, 1.0, [](double s) { return s - 0.5; }), InvariantViolation);
  EXPECT_THROW(DensityMeasure(1.0, 0.5, [](double) { return 1.0; }), InvariantViolation);
  EXPECT_THROW((void)DensityMeasure::f_delta(0.0), DomainError);
  EXPECT_THROW((void)DensityMeasure::power_law(-1.0), DomainError);
}

TEST(DensityMeasure, BallMassBelowDoubleRange) {
  const SpectralMeasure mu = DensityMeasure::power_law(2.0);
  const Magnitude eps = Magnitude::pow2(-2000);
  EXPECT_NEAR(ball_mass(mu, eps).log(), 2.0 * eps.log(), 1e-9);
}

TEST(DensityMeasure, SampledIsPiecewiseLinear) {
  const auto mu = DensityMeasure::sampled({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
  EXPECT_DOUBLE_EQ(mu.density(0.5), 1.0);
  EXPECT_NEAR(mu.total_mass(), 2.0, 1e-12);
  EXPECT_NEAR(ball_mass(SpectralMeasure(mu), 1.0), 1.0, 1e-12);
  EXPECT_NEAR(ball_mass(SpectralMeasure(mu), 1.5), 1.75, 1e-12);
}

TEST(ScalingExponents, ExactPowerLaws) {
  for (const double gamma : {0.5, 1.0, 2.0, 3.5}) {
    const auto est = scaling_exponents(DensityMeasure::power_law(gamma), 1e-6, 0.1, 64);
    EXPECT_NEAR(est.d_minus.value(), gamma, 1e-9);
    EXPECT_NEAR(est.d_plus.value(), gamma, 1e-9);
    ASSERT_EQ(est.per_scale.size(), 64U);
    EXPECT_EQ(est.per_scale.front().eps.to_double(), 1e-6);
    EXPECT_EQ(est.per_scale.back().eps.to_double(), 0.1);
    EXPECT_FALSE(est.per_scale.back().ratio.has_value());
  }
}

TEST(ScalingExponents, FDeltaMatchesTwoDeltaPlusOne) {
  for (const double delta : {0.6, 0.75, 0.9}) {
    const auto est = scaling_exponents(DensityMeasure::f_delta(delta), 1e-6, 0.1, 64);
    EXPECT_NEAR(est.d_minus.value(), 2 * delta + 1, 1e-3);
    EXPECT_NEAR(est.d_plus.value(), 2 * delta + 1, 1e-3);
  }
}

TEST(ScalingExponents, GapMeansInfiniteExponents) {
  const auto est = scaling_exponents(AtomicMeasure::from_pairs({{-1.0, 1.0}, {-0.5, 1.0}}), 1e-6, 0.1, 16);
  EXPECT_TRUE(est.d_minus.is_plus_infinity());
  EXPECT_TRUE(est.d_plus.is_plus_infinity());
}

TEST(ScalingExponents, RejectsBadWindows) {
  const SpectralMeasure mu = DensityMeasure::power_law(1.0);
  EXPECT_THROW((void)scaling_exponents(mu, 0.1, 1e-6, 16), DomainError);
  EXPECT_THROW((void)scaling_exponents(mu, 1e-6, 0.1, 1), DomainError);
  EXPECT_THROW((void)scaling_exponents(mu, 0.0, 0.1, 16), DomainError);
}

TEST(Laplace, PowerLawMatchesIncompleteGamma) {
  for (const double gamma : {0.5, 1.0, 2.0, 3.5}) {
    const SpectralMeasure mu = DensityMeasure::power_law(gamma);
    for (const double t : {0.01, 1.0, 10.0, 1e3, 1e6}) {
      EXPECT_LE(oracle::relative_error(laplace_norm_sq(mu, t), oracle::power_law_laplace(gamma, t)), 1e-10)
          << "gamma=" << gamma << " t=" << t;
    }
  }
}

TEST(Laplace, FDeltaMatchesIncompleteGamma) {
  for (const double delta : {0.6, 0.75, 0.9}) {
    const SpectralMeasure mu = DensityMeasure::f_delta(delta);
    for (const double t : {0.1, 10.0, 1e4, 1e6}) {
      const double want = oracle::f_delta_laplace(delta, t);
      EXPECT_LE(oracle::relative_error(laplace_norm_sq(mu, t), want), 1e-10);
      EXPECT_NEAR(laplace_norm_sq(mu, t, ValueScale::kLog), std::log(want), 1e-10);
    }
  }
}

TEST(Laplace, ReweightedUniformClosedForm) {
  // integral_0^1 s^2 e^{-2s} ds = 1/4 - (5/4) e^{-2}.
  const SpectralMeasure mu = DensityMeasure::uniform(0.0, 1.0).reweighted_by_square(0.0);
  EXPECT_NEAR(laplace_norm_sq(mu, 1.0), 0.25 - 1.25 * std::exp(-2.0), 1e-13);
}

TEST(Laplace, AtomicMatchesLongDoubleSum) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto atoms = oracle::random_atoms(rng, 20, 0.0, 10.0);
    const SpectralMeasure mu = AtomicMeasure::from_pairs(atoms);
    for (const double t : {0.0, 0.01, 0.3, 2.0, 30.0}) {
      EXPECT_LE(oracle::relative_error(laplace_norm_sq(mu, t), oracle::atomic_laplace(atoms, t)), 1e-13);
    }
  }
}

TEST(Laplace, LogScaleSurvivesUnderflow) {
  const SpectralMeasure mu = AtomicMeasure::from_pairs({{-1.0, 1.0}});
  EXPECT_EQ(laplace_norm_sq(mu, 1e4), 0.0);
  EXPECT_DOUBLE_EQ(laplace_norm_sq(mu, 1e4, ValueScale::kLog), -2e4);
}

TEST(Laplace, OrbitNormIsNonincreasing) {
  const SpectralMeasure mu = DensityMeasure::f_delta(0.75);
  double previous = kInf;
  for (double t = 0.0; t < 1e5; t = 2 * t + 0.1) {
    const double v = laplace_norm_sq(mu, t, ValueScale::kLog);
    EXPECT_LE(v, previous);
    previous = v;
  }
}

TEST(Lacunary, AtomsAndWeightsMatchLogDomainSums) {
  const std::vector<double> exponents{0.5, 4, 0.5, 4, 0.5, 4, 0.5, 4, 0.5, 4, 0.5, 4};
  const auto mu = lacunary_measure(0.5, exponents, 12);
  ASSERT_EQ(mu.size(), 12U);
  // Atom k sits at -2^(-2^k); weight is proportional to 2^(-e_k 2^k).
  std::vector<long double> log_w;
  for (int k = 1; k <= 12; ++k) log_w.push_back(-exponents[k - 1] * std::ldexp(1.0L, k) * std::numbers::ln2_v<long double>);
  const long double top = *std::max_element(log_w.begin(), log_w.end());
  long double sum = 0.0L;
  for (const auto l : log_w) sum += std::exp(l - top);
  const long double log_total = top + std::log(sum);
  // Atoms are sorted closest to zero first.
  for (int k = 1; k <= 12; ++k) {
    const auto& atom = mu.atoms()[static_cast<std::size_t>(12 - k)];
    EXPECT_EQ(atom.distance, Magnitude::pow2(-(std::int64_t{1} << k)));
    const double want = static_cast<double>(log_w[static_cast<std::size_t>(k - 1)] - log_total);
    EXPECT_NEAR(atom.weight.log(), want, 1e-12 * std::max(1.0, std::fabs(want)));
  }
  EXPECT_NEAR(mu.total_mass().to_double(), 1.0, 1e-15);
}

TEST(Lacunary, RejectsBadParameters) {
  const std::vector<double> e{1.0, 1.0};
  EXPECT_THROW((void)lacunary_measure(1.5, e, 2), DomainError);
  EXPECT_THROW((void)lacunary_measure(0.5, e, 3), DomainError);
  const std::vector<double> bad{1.0, -1.0};
  EXPECT_THROW((void)lacunary_measure(0.5, bad, 2), DomainError);
}

}  // namespace
}  // namespace semistab
