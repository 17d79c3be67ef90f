#pragma once

// Iterative bootstrap for R^(k).
//
// Level 0 is m i.i.d. copies of Q. Level j is built from level j-1 by
// drawing, for every entry i, a fresh branching vector (Q_i, N_i, C_i1, ...)
// and N_i values sampled uniformly with replacement from the previous pool:
//
//   R^(j)_i = sum_{r=1}^{N_i} C_ir R^(j-1)_{idx(i,r)} + Q_i.
//
// Cost is m branching vectors per level, k*m in total.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "brsim/model.hpp"
#include "brsim/numeric.hpp"
#include "brsim/rng.hpp"

namespace brsim {

/// Pool P^(j,m): m approximate samples of R^(j), with the seed that produced it.
struct SamplePool {
  int level = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  std::size_t m() const { return values.size(); }
};

struct BootstrapOptions {
  unsigned workers = 1;
  // false keeps only the final pool (memory m instead of m*(k+1))
  bool keep_all_levels = true;
};

/// Vector draws for entry i of level j.
inline Stream pool_vector_stream(std::uint64_t seed, int level, std::size_t i) {
  return Stream(derive_key(seed, StreamTag::kPoolVector, static_cast<std::uint64_t>(level)), i);
}

/// Resampling indices for entry i of level j.
inline Stream pool_index_stream(std::uint64_t seed, int level, std::size_t i) {
  return Stream(derive_key(seed, StreamTag::kPoolIndex, static_cast<std::uint64_t>(level)), i);
}

/// Level-0 pool: m i.i.d. copies of Q. The homogeneous variant starts from
/// W^(0) = 1 and draws nothing.
inline SamplePool init_pool(const BranchingVectorSpec& spec, std::size_t m, std::uint64_t seed,
                            DrawCounter& counter, unsigned workers = 1) {
  if (m == 0) throw std::invalid_argument("init_pool: pool size m must be >= 1");
  SamplePool pool{0, seed, std::vector<double>(m, 1.0)};
  if (spec.variant() == Variant::kHomogeneous) return pool;
  parallel_for(m, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Stream rng = pool_vector_stream(seed, 0, i);
      pool.values[i] = sample_q(spec, rng);
    }
  });
  counter.add_q(m);
  return pool;
}

/// One bootstrap step: level j-1 -> level j. The input pool is read-only and
/// each output entry has its own streams, so the result does not depend on
/// `workers`.
inline SamplePool advance_pool(const BranchingVectorSpec& spec, const SamplePool& pool, DrawCounter& counter,
                               unsigned workers = 1) {
  const std::size_t m = pool.m();
  if (m == 0) throw std::invalid_argument("advance_pool: empty pool");
  const int level = pool.level + 1;
  SamplePool next{level, pool.seed, std::vector<double>(m)};
  parallel_for(m, workers, [&](std::size_t begin, std::size_t end) {
    VectorDraw draw;
    for (std::size_t i = begin; i < end; ++i) {
      Stream vec_rng = pool_vector_stream(pool.seed, level, i);
      Stream idx_rng = pool_index_stream(pool.seed, level, i);
      detail::draw_vector(spec, vec_rng, draw);
      double value = draw.q;
      for (const double c : draw.c) value += c * pool.values[idx_rng.below(m)];
      next.values[i] = value;
    }
  });
  counter.add_vectors(m);
  return next;
}

/// Pools for levels 0..k (or just level k without keep_all_levels).
/// Deterministic in (spec, k, m, seed); adds exactly k*m vector draws and
/// m Q draws (none for the homogeneous variant) to `counter`.
inline std::vector<SamplePool> run_bootstrap(const BranchingVectorSpec& spec, int k, std::size_t m,
                                             std::uint64_t seed, DrawCounter& counter,
                                             const BootstrapOptions& options = {}) {
  if (k < 0) throw std::invalid_argument("run_bootstrap: depth k must be >= 0");
  if (m == 0) throw std::invalid_argument("run_bootstrap: pool size m must be >= 1");
  std::vector<SamplePool> pools;
  pools.reserve(options.keep_all_levels ? static_cast<std::size_t>(k) + 1 : 1);
  pools.push_back(init_pool(spec, m, seed, counter, options.workers));
  for (int j = 1; j <= k; ++j) {
    SamplePool next = advance_pool(spec, pools.back(), counter, options.workers);
    if (options.keep_all_levels) {
      pools.push_back(std::move(next));
    } else {
      pools.back() = std::move(next);
    }
  }
  return pools;
}

/// Final pool P^(k,m) only.
inline SamplePool bootstrap_final_pool(const BranchingVectorSpec& spec, int k, std::size_t m, std::uint64_t seed,
                                       DrawCounter& counter, unsigned workers = 1) {
  return std::move(run_bootstrap(spec, k, m, seed, counter, {workers, false}).back());
}

}  // namespace brsim
