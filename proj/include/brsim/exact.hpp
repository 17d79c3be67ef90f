#pragma once

// Naive Monte Carlo on the weighted branching tree: every node of the first
// k+1 generations is generated explicitly, so one sample of R^(k) costs
// sum_{j<=k} E[N]^j branching-vector draws on average.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "brsim/model.hpp"
#include "brsim/numeric.hpp"
#include "brsim/rng.hpp"

namespace brsim {

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

/// One tree realization.
///
/// For R^(k) runs, level_sums[j] is W_j = sum_{i in A_j} Q_i Pi_i and r_k is
/// their sum. For homogeneous runs, level_sums[j] is sum_{i in A_j} Pi_i and
/// r_k is level_sums[k] = W^(k).
struct TreeRunResult {
  double r_k = 0.0;
  std::vector<double> level_sums;
  std::uint64_t nodes_visited = 0;
  bool truncated = false;
};

namespace detail {

struct PendingNode {
  std::uint32_t depth;
  double weight;
};

// Depth-first expansion with an explicit stack. With `homogeneous` the
// weights themselves are summed; otherwise Q_i * Pi_i. Nodes at depth k only
// need their Q (R^(k)) or nothing (W^(k)).
inline TreeRunResult expand_tree(const BranchingVectorSpec& spec, std::uint32_t k, Stream& rng,
                                 std::uint64_t node_budget, bool homogeneous, std::uint64_t& draws) {
  if (node_budget == 0) throw std::invalid_argument("node_budget must be positive");
  std::vector<KahanSum> sums(static_cast<std::size_t>(k) + 1);
  std::vector<PendingNode> stack;
  stack.push_back({0, 1.0});
  VectorDraw draw;
  TreeRunResult result;

  while (!stack.empty()) {
    if (result.nodes_visited == node_budget) {
      result.truncated = true;
      break;
    }
    const PendingNode node = stack.back();
    stack.pop_back();
    ++result.nodes_visited;

    if (node.depth == k) {
      if (homogeneous) {
        sums[k].add(node.weight);
      } else {
        sums[k].add(sample_q(spec, rng) * node.weight);
        ++draws;
      }
      continue;
    }
    draw_vector(spec, rng, draw);
    ++draws;
    sums[node.depth].add(homogeneous ? node.weight : draw.q * node.weight);
    if (node.depth + 1 == k) {
      // Children are leaves and would be popped next in this order anyway.
      KahanSum& leaf_sum = sums[k];
      for (const double c : draw.c) {
        if (result.nodes_visited == node_budget) {
          result.truncated = true;
          break;
        }
        ++result.nodes_visited;
        if (homogeneous) {
          leaf_sum.add(node.weight * c);
        } else {
          leaf_sum.add(sample_q(spec, rng) * (node.weight * c));
          ++draws;
        }
      }
      if (result.truncated) break;
      continue;
    }
    for (auto it = draw.c.rbegin(); it != draw.c.rend(); ++it) {
      stack.push_back({node.depth + 1, node.weight * *it});
    }
  }

  result.level_sums.reserve(sums.size());
  KahanSum total;
  for (const KahanSum& s : sums) {
    result.level_sums.push_back(s.value());
    total.add(s.value());
  }
  result.r_k = homogeneous ? result.level_sums.back() : total.value();
  return result;
}

}  // namespace detail

/// Samples R^(k) = sum_{j<=k} sum_{i in A_j} Q_i Pi_i by building the tree.
/// Every visited node counts as one branching-vector draw. A run that hits
/// node_budget is flagged `truncated` and is not a valid sample.
inline TreeRunResult simulate_r_exact(const BranchingVectorSpec& spec, int k, Stream& rng,
                                      std::uint64_t node_budget, DrawCounter& counter) {
  if (k < 0) throw std::invalid_argument("simulate_r_exact: depth k must be >= 0");
  std::uint64_t draws = 0;
  TreeRunResult r = detail::expand_tree(spec, static_cast<std::uint32_t>(k), rng, node_budget, false, draws);
  counter.add_vectors(draws);
  return r;
}

/// Samples W^(k) = sum_{i in A_k} Pi_i for a homogeneous model. Nodes of
/// generations < k draw (N, C); generation-k nodes draw nothing.
inline TreeRunResult simulate_w_exact(const BranchingVectorSpec& spec, int k, Stream& rng,
                                      std::uint64_t node_budget, DrawCounter& counter) {
  if (spec.variant() != Variant::kHomogeneous) {
    throw InvalidSpec("simulate_w_exact: requires the homogeneous variant");
  }
  if (k < 0) throw std::invalid_argument("simulate_w_exact: depth k must be >= 0");
  std::uint64_t draws = 0;
  TreeRunResult r = detail::expand_tree(spec, static_cast<std::uint32_t>(k), rng, node_budget, true, draws);
  counter.add_vectors(draws);
  return r;
}

/// Expected nodes (= branching-vector draws) for one exact sample:
/// sum_{j=0}^k E[N]^j.
inline double expected_node_count(const BranchingVectorSpec& spec, int k) {
  if (k < 0) throw std::invalid_argument("expected_node_count: depth k must be >= 0");
  const double mean_n = spec.n().mean();
  KahanSum total;
  double term = 1.0;
  for (int j = 0; j <= k; ++j) {
    total.add(term);
    term *= mean_n;
  }
  return total.value();
}

/// Replicate r uses substream r of the experiment's naive-tree key, so the
/// sample set is the same for any worker count.
inline Stream naive_stream(std::uint64_t seed, std::uint64_t replicate) {
  return Stream(derive_key(seed, StreamTag::kNaiveTree), replicate);
}

/// `reps` independent exact samples of R^(k).
inline std::vector<TreeRunResult> run_exact(const BranchingVectorSpec& spec, int k, std::size_t reps,
                                            std::uint64_t seed, DrawCounter& counter,
                                            std::uint64_t node_budget = kDefaultNodeBudget, unsigned workers = 1) {
  std::vector<TreeRunResult> out(reps);
  parallel_for(reps, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      Stream rng = naive_stream(seed, r);
      out[r] = simulate_r_exact(spec, k, rng, node_budget, counter);
    }
  });
  return out;
}

}  // namespace brsim
