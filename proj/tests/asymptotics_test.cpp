#include <gtest/gtest.h>

#include <cmath>

#include "brsim/asymptotics.hpp"
#include "brsim/model.hpp"

namespace brsim {
namespace {

// Values below were computed with mpmath at 25 digits.
constexpr double kZeta25 = 1.34148725725091717975677;
constexpr double kPrintedInputsCoefficient = 0.1805100241071951186686964;

TEST(TailCoefficient, PrintedInputs) {
  const double c = tail_coefficient(0.25, 1.0, 0.49, 0.07, 2.5, 10);
  EXPECT_NEAR(c, kPrintedInputsCoefficient, 1e-14);
  // the rounded 0.365 constant is not reproduced by the printed inputs
  EXPECT_GT(std::abs(c - 0.365), 0.1);
}

TEST(TailCoefficient, ModelDerivedInputs) {
  const auto spec = BranchingVectorSpec::independent(DistributionSpec::exponential(1), DistributionSpec::zeta(2.5),
                                                     DistributionSpec::uniform(0, 0.5));
  const double rho_1 = rho(spec, 1.0);
  EXPECT_NEAR(rho_1, 0.4868431165792391750174358, 1e-13);
  // E[C^2.5] for uniform(0, 0.5) needs E[N] only
  const double rho_25 = spec.n().mean() * spec.c().abs_moment(2.5);
  EXPECT_NEAR(rho_25, 0.09835716260204940647003526, 1e-13);
  EXPECT_NEAR(tail_coefficient(0.25, 1.0, rho_1, rho_25, 2.5, 10), 0.1833463210350962798165644, 1e-13);
  const double rho_15 = spec.n().mean() * spec.c().abs_moment(1.5);
  EXPECT_NEAR(rho_15, 0.2754000552857383381160987, 1e-13);
  EXPECT_NEAR(tail_coefficient(0.25, 1.0, rho_1, rho_15, 1.5, 10), 0.4684097004549068021135343, 1e-13);
}

TEST(TailCoefficient, DepthZeroAndMonotone) {
  EXPECT_EQ(tail_coefficient(0.25, 1.0, 0.49, 0.07, 2.5, 0), 0.0);
  double prev = 0.0;
  for (int k = 0; k <= 30; ++k) {
    const double c = tail_coefficient(0.25, 1.0, 0.49, 0.07, 2.5, k);
    EXPECT_GE(c, prev);
    prev = c;
  }
  EXPECT_THROW(tail_coefficient(0.25, 1.0, 1.0, 0.07, 2.5, 10), std::invalid_argument);
  EXPECT_THROW(tail_coefficient(0.25, 1.0, 0.5, 0.07, 2.5, -1), std::invalid_argument);
}

TEST(ZetaTail, Values) {
  EXPECT_EQ(zeta_tail(2.5, 0.0), 1.0);
  EXPECT_NEAR(zeta_tail(2.5, 1.0), 0.2545587037112228250849576, 1e-14);
  EXPECT_NEAR(zeta_tail(2.5, 1.7), zeta_tail(2.5, 1.0), 0.0);
  EXPECT_NEAR(zeta_tail(2.5, 2.0), 1.0 - (1.0 + std::pow(2.0, -2.5)) / kZeta25, 1e-14);
  double prev = 1.0;
  for (double x = 0.0; x < 500.0; x += 0.7) {
    const double t = zeta_tail(2.5, x);
    EXPECT_LE(t, prev);
    EXPECT_GE(t, 0.0);
    prev = t;
  }
  EXPECT_LT(zeta_tail(2.5, 1e12), 1e-17);
}

TEST(ZetaTail, RegularVariation) {
  const double limit = 1.0 / (1.5 * kZeta25);
  EXPECT_NEAR(limit, 0.4969608641925181166100283, 1e-15);
  EXPECT_NEAR(zeta_tail(2.5, 1000.0) * std::pow(1000.0, 1.5), 0.4965882988446030218982912, 1e-12);
  EXPECT_NEAR(zeta_tail(2.5, 10000.0) * std::pow(10000.0, 1.5), 0.4969235936807063742762696, 1e-11);
  for (const double x : {1e3, 1e4}) EXPECT_NEAR(zeta_tail(2.5, x) * std::pow(x, 1.5) / limit, 1.0, 0.01);
}

TEST(GK, Values) {
  const auto n = DistributionSpec::zeta(2.5);
  const TailAsymptotic printed{2.5, 0.365, 10};
  EXPECT_NEAR(g_k(1.0, printed, n), 0.365 * 0.2545587037112228250849576, 1e-14);
  EXPECT_NEAR(g_k(1.0, printed, n), 0.09291, 1e-5);
  EXPECT_EQ(g_k(0.0, printed, n), 0.365);
  EXPECT_EQ(g_k(7.0, TailAsymptotic{2.5, 0.0, 10}, n), 0.0);
  EXPECT_THROW(g_k(1.0, printed, DistributionSpec::poisson(3)), std::invalid_argument);
  double prev = printed.coefficient;
  for (const auto& [x, g] : g_k_curve(0, 200, printed, n)) {
    EXPECT_LE(g, prev);
    prev = g;
  }
  const double mid = g_k_interpolated(2.25, printed, n);
  EXPECT_NEAR(mid, 0.75 * g_k(2.0, printed, n) + 0.25 * g_k(3.0, printed, n), 1e-16);
  const TailAsymptotic made = make_tail_asymptotic(0.25, 1.0, 0.49, 0.07, 2.5, 10);
  EXPECT_NEAR(made.coefficient, kPrintedInputsCoefficient, 1e-14);
  EXPECT_EQ(made.k, 10);
}

}  // namespace
}  // namespace brsim
