#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "brsim/exact.hpp"
#include "stat_helpers.hpp"

namespace brsim {
namespace {

using testing::mean_se;
using testing::within_se;

BranchingVectorSpec chain(double c) {
  return BranchingVectorSpec::independent(DistributionSpec::constant(1), DistributionSpec::constant(1),
                                          DistributionSpec::constant(c));
}

BranchingVectorSpec example1() {
  return BranchingVectorSpec::independent(DistributionSpec::uniform(0, 1), DistributionSpec::poisson(3),
                                          DistributionSpec::uniform(0, 0.2));
}

TEST(SimulateRExact, UnitChain) {
  Stream rng(1, 0);
  DrawCounter counter;
  const TreeRunResult r = simulate_r_exact(chain(1.0), 10, rng, kDefaultNodeBudget, counter);
  EXPECT_EQ(r.r_k, 11.0);
  EXPECT_EQ(r.level_sums, std::vector<double>(11, 1.0));
  EXPECT_EQ(r.nodes_visited, 11u);
  EXPECT_FALSE(r.truncated);
  EXPECT_EQ(counter.vector_draws(), 11u);
}

TEST(SimulateRExact, HalvingChain) {
  Stream rng(1, 0);
  DrawCounter counter;
  const TreeRunResult r = simulate_r_exact(chain(0.5), 10, rng, kDefaultNodeBudget, counter);
  EXPECT_NEAR(r.r_k, 2047.0 / 1024.0, 1e-12 * 2.0);
  EXPECT_EQ(r.level_sums.back(), std::ldexp(1.0, -10));
}

TEST(SimulateRExact, DepthZeroIsQ) {
  Stream rng(4, 0);
  DrawCounter counter;
  const TreeRunResult r = simulate_r_exact(example1(), 0, rng, kDefaultNodeBudget, counter);
  ASSERT_EQ(r.level_sums.size(), 1u);
  EXPECT_EQ(r.r_k, r.level_sums[0]);
  EXPECT_EQ(r.nodes_visited, 1u);
  EXPECT_THROW(simulate_r_exact(example1(), -1, rng, kDefaultNodeBudget, counter), std::invalid_argument);
  EXPECT_THROW(simulate_r_exact(example1(), 3, rng, 0, counter), std::invalid_argument);
}

TEST(SimulateRExact, LevelSumsAddUp) {
  DrawCounter counter;
  for (std::uint64_t r = 0; r < 2000; ++r) {
    Stream rng = naive_stream(5, r);
    const TreeRunResult run = simulate_r_exact(example1(), 7, rng, kDefaultNodeBudget, counter);
    ASSERT_EQ(run.level_sums.size(), 8u);
    double total = 0.0;
    for (const double w : run.level_sums) total += w;
    ASSERT_NEAR(run.r_k, total, 1e-12 * std::max(1.0, std::abs(total)));
  }
}

TEST(SimulateRExact, BudgetFlagsTruncation) {
  const auto binary = BranchingVectorSpec::independent(DistributionSpec::constant(1), DistributionSpec::constant(2),
                                                       DistributionSpec::constant(1));
  Stream rng(1, 0);
  DrawCounter counter;
  const TreeRunResult r = simulate_r_exact(binary, 10, rng, 100, counter);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.nodes_visited, 100u);
  EXPECT_EQ(counter.vector_draws(), 100u);
  Stream rng2(1, 0);
  const TreeRunResult full = simulate_r_exact(binary, 10, rng2, 2047, counter);
  EXPECT_FALSE(full.truncated);
  EXPECT_EQ(full.r_k, 2047.0);
}

// Mean nodes over 10^4 runs vs sum_j E[N]^j.
TEST(SimulateRExact, NodeCountMatchesExpectation) {
  struct Case {
    BranchingVectorSpec spec;
    int k;
  };
  const std::vector<Case> cases = {
      {example1(), 6},
      {BranchingVectorSpec::independent(DistributionSpec::constant(1), DistributionSpec::poisson(1),
                                        DistributionSpec::uniform(0, 1)),
       8},
      {BranchingVectorSpec::independent(DistributionSpec::constant(1), DistributionSpec::bernoulli(0.5),
                                        DistributionSpec::uniform(0, 1)),
       8},
  };
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    DrawCounter counter;
    const auto runs = run_exact(c.spec, c.k, 10000, seed++, counter);
    std::vector<double> nodes;
    std::uint64_t total = 0;
    for (const auto& r : runs) {
      nodes.push_back(static_cast<double>(r.nodes_visited));
      total += r.nodes_visited;
    }
    EXPECT_TRUE(within_se(mean_se(nodes), expected_node_count(c.spec, c.k))) << c.spec.canonical();
    EXPECT_EQ(counter.vector_draws(), total);
  }
}

TEST(ExpectedNodeCount, GeometricSums) {
  EXPECT_EQ(expected_node_count(example1(), 10), 88573.0);
  EXPECT_EQ(expected_node_count(chain(1.0), 10), 11.0);
  const auto dead = BranchingVectorSpec::independent(DistributionSpec::constant(1), DistributionSpec::constant(0),
                                                     DistributionSpec::constant(1));
  EXPECT_EQ(expected_node_count(dead, 7), 1.0);
  const auto heavy = BranchingVectorSpec::independent(DistributionSpec::constant(1), DistributionSpec::zeta(1.8),
                                                      DistributionSpec::constant(1));
  EXPECT_THROW(expected_node_count(heavy, 3), UnsupportedMoment);
}

TEST(SimulateRExact, Example1MeanAtDepth6) {
  // E[R^(6)] = 0.5 (1 - 0.3^7) / 0.7
  DrawCounter counter;
  const auto runs = run_exact(example1(), 6, 20000, 9, counter);
  std::vector<double> xs;
  for (const auto& r : runs) xs.push_back(r.r_k);
  EXPECT_TRUE(within_se(mean_se(xs), 0.5 * (1.0 - std::pow(0.3, 7)) / 0.7));
}

TEST(SimulateWExact, DeterministicTrees) {
  DrawCounter counter;
  Stream rng(1, 0);
  const auto binary = BranchingVectorSpec::homogeneous(DistributionSpec::constant(2), DistributionSpec::constant(0.5));
  const TreeRunResult w = simulate_w_exact(binary, 5, rng, kDefaultNodeBudget, counter);
  EXPECT_EQ(w.r_k, 1.0);
  EXPECT_EQ(w.nodes_visited, 63u);
  // generation-5 nodes draw nothing
  EXPECT_EQ(counter.vector_draws(), 31u);
  const auto dead = BranchingVectorSpec::homogeneous(DistributionSpec::constant(0), DistributionSpec::constant(1));
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(simulate_w_exact(dead, k, rng, kDefaultNodeBudget, counter).r_k, 0.0);
  EXPECT_EQ(simulate_w_exact(dead, 0, rng, kDefaultNodeBudget, counter).r_k, 1.0);
  EXPECT_THROW(simulate_w_exact(example1(), 3, rng, kDefaultNodeBudget, counter), InvalidSpec);
}

TEST(SimulateWExact, MartingaleMean) {
  const auto spec = BranchingVectorSpec::homogeneous(DistributionSpec::poisson(3), DistributionSpec::uniform(0, 0.2));
  DrawCounter counter;
  std::vector<double> xs;
  for (std::uint64_t r = 0; r < 20000; ++r) {
    Stream rng = naive_stream(33, r);
    xs.push_back(simulate_w_exact(spec, 4, rng, kDefaultNodeBudget, counter).r_k / std::pow(0.3, 4));
  }
  EXPECT_TRUE(within_se(mean_se(xs), 1.0));
}

TEST(RunExact, IndependentOfWorkerCount) {
  DrawCounter c1, c4;
  const auto a = run_exact(example1(), 5, 300, 77, c1, kDefaultNodeBudget, 1);
  const auto b = run_exact(example1(), 5, 300, 77, c4, kDefaultNodeBudget, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].r_k, b[i].r_k);
    EXPECT_EQ(a[i].nodes_visited, b[i].nodes_visited);
  }
  EXPECT_EQ(c1.vector_draws(), c4.vector_draws());
}

}  // namespace
}  // namespace brsim
