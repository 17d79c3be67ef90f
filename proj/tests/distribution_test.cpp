#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "brsim/distribution.hpp"
#include "stat_helpers.hpp"

namespace brsim {
namespace {

using testing::mean_se;
using testing::within_se;

TEST(DistributionSpec, RejectsInvalidParameters) {
  EXPECT_THROW(DistributionSpec::uniform(1.0, 1.0), InvalidSpec);
  EXPECT_THROW(DistributionSpec::uniform(2.0, 1.0), InvalidSpec);
  EXPECT_THROW(DistributionSpec::exponential(0.0), InvalidSpec);
  EXPECT_THROW(DistributionSpec::poisson(-0.1), InvalidSpec);
  EXPECT_THROW(DistributionSpec::zeta(1.0), InvalidSpec);
  EXPECT_THROW(DistributionSpec::bernoulli(1.5), InvalidSpec);
  EXPECT_THROW(DistributionSpec::constant(NAN), InvalidSpec);
  EXPECT_NO_THROW(DistributionSpec::poisson(0.0));
  EXPECT_NO_THROW(DistributionSpec::bernoulli(0.0));
}

TEST(DistributionSpec, IntegerValuedKinds) {
  EXPECT_TRUE(DistributionSpec::poisson(3).integer_valued());
  EXPECT_TRUE(DistributionSpec::zeta(2.5).integer_valued());
  EXPECT_TRUE(DistributionSpec::bernoulli(0.3).integer_valued());
  EXPECT_TRUE(DistributionSpec::constant(2).integer_valued());
  EXPECT_FALSE(DistributionSpec::constant(2.5).integer_valued());
  EXPECT_FALSE(DistributionSpec::constant(-1).integer_valued());
  EXPECT_FALSE(DistributionSpec::uniform(0, 1).integer_valued());
  EXPECT_FALSE(DistributionSpec::exponential(1).integer_valued());
  Stream rng(1, 1);
  EXPECT_THROW(DistributionSpec::uniform(0, 1).sample_count(rng), InvalidSpec);
}

// Riemann zeta against mpmath (30 digits).
TEST(Zeta, MatchesReferenceValues) {
  EXPECT_NEAR(riemann_zeta(2.5), 1.34148725725091717975677, 1e-14);
  EXPECT_NEAR(riemann_zeta(1.5), 2.61237534868548834334857, 1e-13);
  EXPECT_NEAR(riemann_zeta(2.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-14);
  EXPECT_NEAR(riemann_zeta(4.0), std::pow(std::numbers::pi, 4) / 90.0, 1e-14);
  // Hurwitz shift identity zeta(s, a) = a^-s + zeta(s, a + 1)
  for (const double a : {1.0, 3.0, 9.5, 12.0, 1000.0}) {
    EXPECT_NEAR(hurwitz_zeta(2.5, a), std::pow(a, -2.5) + hurwitz_zeta(2.5, a + 1.0),
                1e-13 * hurwitz_zeta(2.5, a));
  }
}

struct MeanCase {
  DistributionSpec law;
  double mean;
};

// Sample means over 10^6 draws sit within 5 standard errors of the analytic mean.
TEST(DistributionSpec, SampleMeansMatchAnalyticMeans) {
  const std::vector<MeanCase> cases = {
      {DistributionSpec::constant(1.25), 1.25},
      {DistributionSpec::uniform(-1.0, 3.0), 1.0},
      {DistributionSpec::exponential(2.0), 0.5},
      {DistributionSpec::poisson(3.0), 3.0},
      {DistributionSpec::poisson(0.0), 0.0},
      {DistributionSpec::poisson(37.5), 37.5},
      {DistributionSpec::zeta(3.5), riemann_zeta(2.5) / riemann_zeta(3.5)},
      {DistributionSpec::bernoulli(0.3), 0.3},
  };
  std::uint64_t id = 0;
  for (const auto& c : cases) {
    Stream rng(derive_key(2024, 77), id++);
    std::vector<double> xs(1'000'000);
    for (double& x : xs) x = c.law.sample(rng);
    const auto s = mean_se(xs);
    EXPECT_TRUE(within_se(s, c.mean)) << c.law.describe() << " mean " << s.mean << " se " << s.se;
    EXPECT_DOUBLE_EQ(c.law.mean(), c.mean);
  }
}

// Empirical mass of {1,2,3} for zeta(2.5) matches k^-s / zeta(s).
TEST(DistributionSpec, ZetaMassesMatch) {
  const auto law = DistributionSpec::zeta(2.5);
  Stream rng(derive_key(5, 6), 0);
  constexpr int kDraws = 1'000'000;
  std::vector<double> hit1(kDraws), hit2(kDraws), hit3(kDraws);
  for (int i = 0; i < kDraws; ++i) {
    const auto n = law.sample_count(rng);
    ASSERT_GE(n, 1u);
    hit1[i] = n == 1;
    hit2[i] = n == 2;
    hit3[i] = n == 3;
  }
  const double z = riemann_zeta(2.5);
  EXPECT_TRUE(within_se(mean_se(hit1), 1.0 / z));
  EXPECT_TRUE(within_se(mean_se(hit2), std::pow(2.0, -2.5) / z));
  EXPECT_TRUE(within_se(mean_se(hit3), std::pow(3.0, -2.5) / z));
}

TEST(DistributionSpec, ClosedFormMoments) {
  // E[U^1.5] = 1/2.5 for uniform(0,1)
  EXPECT_NEAR(DistributionSpec::uniform(0, 1).abs_moment(1.5), 0.4, 1e-15);
  // E[C^2] for uniform(0, 0.2) = 0.04 / 3
  EXPECT_NEAR(DistributionSpec::uniform(0, 0.2).abs_moment(2.0), 0.04 / 3.0, 1e-16);
  // E|X| for uniform(-1, 3) = (1/2 + 9/2) / 4
  EXPECT_NEAR(DistributionSpec::uniform(-1, 3).abs_moment(1.0), 1.25, 1e-15);
  EXPECT_NEAR(DistributionSpec::uniform(-1, 3).moment(2.0), (27.0 + 1.0) / 12.0, 1e-14);
  EXPECT_THROW(DistributionSpec::uniform(-1, 3).moment(1.5), UnsupportedMoment);
  EXPECT_NEAR(DistributionSpec::exponential(2.0).abs_moment(2.0), 0.5, 1e-15);
  // Poisson second moment = mean + mean^2
  EXPECT_NEAR(DistributionSpec::poisson(3.0).abs_moment(2.0), 12.0, 1e-12);
  EXPECT_NEAR(DistributionSpec::poisson(3.0).abs_moment(1.0), 3.0, 1e-15);
  // zeta(2.5): E[N] = zeta(1.5)/zeta(2.5) (mpmath), E[N^1.5] infinite
  EXPECT_NEAR(DistributionSpec::zeta(2.5).mean(), 1.947372466316956700069743, 1e-12);
  EXPECT_THROW(DistributionSpec::zeta(2.5).abs_moment(1.5), UnsupportedMoment);
  EXPECT_THROW(DistributionSpec::zeta(2.0).mean(), UnsupportedMoment);
  EXPECT_DOUBLE_EQ(DistributionSpec::bernoulli(0.25).abs_moment(3.0), 0.25);
  EXPECT_DOUBLE_EQ(DistributionSpec::constant(-2.0).abs_moment(2.0), 4.0);
}

TEST(DistributionSpec, SampleSupports) {
  Stream rng(3, 3);
  const auto u = DistributionSpec::uniform(0.0, 0.2);
  const auto e = DistributionSpec::exponential(1.0);
  const auto b = DistributionSpec::bernoulli(0.5);
  for (int i = 0; i < 100000; ++i) {
    const double x = u.sample(rng);
    ASSERT_TRUE(x >= 0.0 && x <= 0.2);
    ASSERT_GE(e.sample(rng), 0.0);
    const double y = b.sample(rng);
    ASSERT_TRUE(y == 0.0 || y == 1.0);
  }
}

TEST(DistributionSpec, DescribeIsCanonical) {
  EXPECT_EQ(DistributionSpec::uniform(0, 0.2).describe(), "uniform(0,0.2)");
  EXPECT_EQ(DistributionSpec::poisson(3).describe(), "poisson(3)");
  EXPECT_EQ(DistributionSpec::zeta(2.5).describe(), "zeta(2.5)");
}

}  // namespace
}  // namespace brsim
