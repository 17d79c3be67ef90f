#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace brsim::testing {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  double sd = 0.0;
};

template <typename Range>
MeanSe mean_se(const Range& xs) {
  double n = 0.0, mean = 0.0, m2 = 0.0;
  for (const double x : xs) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  const double var = n > 1.0 ? m2 / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n), std::sqrt(var)};
}

// |estimate - target| <= z * se, with a floor for zero-variance samples.
inline bool within_se(const MeanSe& s, double target, double z = 5.0) {
  return std::abs(s.mean - target) <= z * s.se + 1e-12 * (1.0 + std::abs(target));
}

}  // namespace brsim::testing
