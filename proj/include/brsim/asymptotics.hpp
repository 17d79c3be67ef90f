#pragma once

// Tail asymptotics of R^(k) when N is regularly varying and dominates:
//
//   P(R^(k) > x) ~ (E[C] E[Q])^a / (1 - rho_1)^a
//                  * sum_{j=0}^k rho_a^j (1 - rho_1^(k-j))^a * P(N > x).
//
// The curve is a large-x reference overlay, not a finite-x prediction.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "brsim/distribution.hpp"
#include "brsim/numeric.hpp"

namespace brsim {

/// coefficient * P(N > x) at depth k.
struct TailAsymptotic {
  double alpha = 0.0;
  double coefficient = 0.0;
  int k = 0;
};

/// The prefactor of P(N > x), summed term by term.
inline double tail_coefficient(double ec, double eq, double rho_1, double rho_alpha, double alpha, int k) {
  if (!(rho_1 < 1.0)) throw std::invalid_argument("tail_coefficient: requires rho_1 < 1");
  if (k < 0) throw std::invalid_argument("tail_coefficient: k must be >= 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("tail_coefficient: alpha must be > 0");
  const double prefactor = std::pow(ec * eq / (1.0 - rho_1), alpha);
  KahanSum sum;
  for (int j = 0; j <= k; ++j) {
    sum.add(std::pow(rho_alpha, j) * std::pow(1.0 - std::pow(rho_1, k - j), alpha));
  }
  return prefactor * sum.value();
}

inline TailAsymptotic make_tail_asymptotic(double ec, double eq, double rho_1, double rho_alpha, double alpha,
                                           int k) {
  return {alpha, tail_coefficient(ec, eq, rho_1, rho_alpha, alpha, k), k};
}

/// P(N > x) for N ~ zeta(s): Hurwitz zeta(s, floor(x) + 1) / zeta(s).
inline double zeta_tail(double s, double x) {
  if (!(s > 1.0)) throw std::invalid_argument("zeta_tail: requires s > 1");
  if (x < 1.0) return 1.0;
  return hurwitz_zeta(s, std::floor(x) + 1.0) / riemann_zeta(s);
}

/// coefficient * P(N > x) for a zeta-distributed N.
inline double g_k(double x, const TailAsymptotic& tail, const DistributionSpec& n_spec) {
  if (n_spec.kind() != DistributionKind::kZeta) {
    throw std::invalid_argument("g_k: N must be zeta-distributed (regularly varying), got " + n_spec.describe());
  }
  return tail.coefficient * zeta_tail(n_spec.p1(), x);
}

/// g_k evaluated at integers and linearly interpolated in between (for plots).
inline double g_k_interpolated(double x, const TailAsymptotic& tail, const DistributionSpec& n_spec) {
  const double lo = std::floor(x);
  const double w = x - lo;
  const double at_lo = g_k(lo, tail, n_spec);
  if (w == 0.0) return at_lo;
  return (1.0 - w) * at_lo + w * g_k(lo + 1.0, tail, n_spec);
}

/// (x, g_k(x)) at x = x_min, x_min + 1, ..., x_max.
inline std::vector<std::pair<double, double>> g_k_curve(int x_min, int x_max, const TailAsymptotic& tail,
                                                        const DistributionSpec& n_spec) {
  std::vector<std::pair<double, double>> out;
  for (int x = x_min; x <= x_max; ++x) out.emplace_back(x, g_k(x, tail, n_spec));
  return out;
}

}  // namespace brsim
