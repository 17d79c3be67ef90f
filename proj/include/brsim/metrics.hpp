#pragma once

// Empirical distributions, the Kantorovich-Rubinstein (Wasserstein-1)
// distance, plug-in estimators, and the convergence-rate bounds for the
// bootstrap pools.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "brsim/bootstrap.hpp"
#include "brsim/distribution.hpp"
#include "brsim/numeric.hpp"

namespace brsim {

/// Sorted sample with its right-continuous ECDF and left-continuous
/// generalized inverse  F^-1(u) = inf{x : F(x) >= u}.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> values) : sorted_(std::move(values)) {
    if (sorted_.empty()) throw std::invalid_argument("EmpiricalDistribution: empty sample");
    for (const double v : sorted_) {
      if (std::isnan(v)) throw std::invalid_argument("EmpiricalDistribution: NaN in sample");
    }
    std::stable_sort(sorted_.begin(), sorted_.end());
  }
  explicit EmpiricalDistribution(std::span<const double> values)
      : EmpiricalDistribution(std::vector<double>(values.begin(), values.end())) {}
  explicit EmpiricalDistribution(const SamplePool& pool) : EmpiricalDistribution(pool.values) {}

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted_values() const { return sorted_; }

  /// sorted_values[ceil(u n) - 1] for u in (0, 1].
  double quantile(double u) const {
    if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("quantile: u must lie in (0, 1]");
    const auto n = static_cast<double>(sorted_.size());
    auto idx = static_cast<std::size_t>(std::ceil(u * n));
    // u * n may round up past an exact breakpoint i/n
    if (idx > 1 && static_cast<double>(idx - 1) / n >= u) --idx;
    idx = std::clamp<std::size_t>(idx, 1, sorted_.size());
    return sorted_[idx - 1];
  }

  /// Fraction of values <= x.
  double cdf(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
  }

  double mean() const {
    KahanSum s;
    for (const double v : sorted_) s.add(v);
    return s.value() / static_cast<double>(sorted_.size());
  }

  /// (x, F(x)) at each distinct sample point, increasing in x.
  std::vector<std::pair<double, double>> ecdf_points() const {
    std::vector<std::pair<double, double>> out;
    const auto n = static_cast<double>(sorted_.size());
    for (std::size_t i = 0; i < sorted_.size(); ++i) {
      if (i + 1 < sorted_.size() && sorted_[i + 1] == sorted_[i]) continue;
      out.emplace_back(sorted_[i], static_cast<double>(i + 1) / n);
    }
    return out;
  }

 private:
  std::vector<double> sorted_;
};

/// Closed-form distribution function of a DistributionSpec law, plus the
/// expected excess  G(y) = E[(X - y)^+]  used for exact distance integrals.
class AnalyticCDF {
 public:
  explicit AnalyticCDF(DistributionSpec law) : law_(law) {}

  const DistributionSpec& law() const { return law_; }

  double cdf(double x) const {
    const double p1 = law_.p1();
    switch (law_.kind()) {
      case DistributionKind::kConstant: return x >= p1 ? 1.0 : 0.0;
      case DistributionKind::kUniform: return std::clamp((x - p1) / (law_.p2() - p1), 0.0, 1.0);
      case DistributionKind::kExponential: return x <= 0.0 ? 0.0 : -std::expm1(-p1 * x);
      case DistributionKind::kPoisson:
        if (x < 0.0) return 0.0;
        if (p1 == 0.0) return 1.0;
        return boost::math::gamma_q(std::floor(x) + 1.0, p1);
      case DistributionKind::kZeta:
        if (x < 1.0) return 0.0;
        return 1.0 - hurwitz_zeta(p1, std::floor(x) + 1.0) / law_.zeta_normalizer();
      case DistributionKind::kBernoulli:
        if (x < 0.0) return 0.0;
        return x < 1.0 ? 1.0 - p1 : 1.0;
    }
    return 0.0;
  }

  /// inf{x : F(x) >= u} for u in (0, 1].
  double quantile(double u) const {
    if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("quantile: u must lie in (0, 1]");
    const double p1 = law_.p1();
    switch (law_.kind()) {
      case DistributionKind::kConstant: return p1;
      case DistributionKind::kUniform: return p1 + u * (law_.p2() - p1);
      case DistributionKind::kExponential:
        return u == 1.0 ? std::numeric_limits<double>::infinity() : -std::log1p(-u) / p1;
      case DistributionKind::kBernoulli: return u <= 1.0 - p1 ? 0.0 : 1.0;
      case DistributionKind::kPoisson:
        if (p1 == 0.0) return 0.0;
        if (u == 1.0) return std::numeric_limits<double>::infinity();
        return integer_quantile(u, 0.0);
      case DistributionKind::kZeta:
        if (u == 1.0) return std::numeric_limits<double>::infinity();
        return integer_quantile(u, 1.0);
    }
    return 0.0;
  }

  double mean() const { return law_.mean(); }

  /// E[(X - y)^+].
  double expected_excess(double y) const {
    const double p1 = law_.p1();
    switch (law_.kind()) {
      case DistributionKind::kConstant: return std::max(p1 - y, 0.0);
      case DistributionKind::kUniform: {
        const double b = law_.p2();
        if (y <= p1) return 0.5 * (p1 + b) - y;
        if (y >= b) return 0.0;
        return (b - y) * (b - y) / (2.0 * (b - p1));
      }
      case DistributionKind::kExponential:
        return y <= 0.0 ? 1.0 / p1 - y : std::exp(-p1 * y) / p1;
      case DistributionKind::kBernoulli:
        if (y < 0.0) return p1 - y;
        return y < 1.0 ? p1 * (1.0 - y) : 0.0;
      case DistributionKind::kPoisson: {
        if (y < 0.0) return p1 - y;
        if (p1 == 0.0) return 0.0;
        // sum_{k>=K} (k - y) p_k with k p_k = mean p_{k-1}
        const double first = std::floor(y) + 1.0;
        return p1 * poisson_at_least(first - 1.0) - y * poisson_at_least(first);
      }
      case DistributionKind::kZeta: {
        const double s = p1;
        if (s <= 2.0) throw UnsupportedMoment("zeta(" + format_shortest(s) + ") has infinite mean");
        if (y < 1.0) return mean() - y;
        const double first = std::floor(y) + 1.0;
        return (hurwitz_zeta(s - 1.0, first) - y * hurwitz_zeta(s, first)) / law_.zeta_normalizer();
      }
    }
    return 0.0;
  }

 private:
  double poisson_at_least(double j) const {
    return j <= 0.0 ? 1.0 : boost::math::gamma_p(j, law_.p1());
  }

  // Smallest integer k >= lo with F(k) >= u: doubling then bisection.
  double integer_quantile(double u, double lo) const {
    if (cdf(lo) >= u) return lo;
    double step = 1.0;
    double hi = lo + step;
    while (cdf(hi) < u) {
      lo = hi;
      step *= 2.0;
      hi = lo + step;
    }
    // invariant: F(lo) < u <= F(hi)
    while (hi - lo > 1.0) {
      const double mid = std::floor(0.5 * (lo + hi));
      (cdf(mid) >= u ? hi : lo) = mid;
    }
    return hi;
  }

  DistributionSpec law_;
};

/// d1 between two empirical laws: the integral over (0, 1] of
/// |F^-1(u) - G^-1(u)|, evaluated exactly on the merged grid {i/n} U {j/m}.
inline double d1_empirical(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto& x = a.sorted_values();
  const auto& y = b.sorted_values();
  KahanSum total;
  if (x.size() == y.size()) {
    for (std::size_t i = 0; i < x.size(); ++i) total.add(std::abs(x[i] - y[i]));
    return total.value() / static_cast<double>(x.size());
  }
  const std::uint64_t n = x.size();
  const std::uint64_t m = y.size();
  // positions in units of 1/(n m)
  std::uint64_t pos = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n && j < m) {
    const std::uint64_t next_a = (i + 1) * m;
    const std::uint64_t next_b = (j + 1) * n;
    const std::uint64_t next = std::min(next_a, next_b);
    total.add(static_cast<double>(next - pos) * std::abs(x[i] - y[j]));
    pos = next;
    if (next_a == next) ++i;
    if (next_b == next) ++j;
  }
  return total.value() / (static_cast<double>(n) * static_cast<double>(m));
}

/// d1 between an empirical law and a closed-form reference, computed exactly
/// as the integral of |F_n(x) - F(x)| dx stretch by stretch between sample
/// points, using the expected-excess function of the reference.
inline double d1_vs_analytic(const EmpiricalDistribution& a, const AnalyticCDF& f) {
  const double mean = f.mean();  // throws for infinite-mean references
  if (!std::isfinite(mean)) throw UnsupportedMoment("d1_vs_analytic: reference has infinite mean");
  const auto& x = a.sorted_values();
  const std::size_t n = x.size();
  KahanSum total;
  // (-inf, x_1): F_n = 0, contributes E[(x_1 - X)^+]
  total.add(std::max(0.0, x.front() - mean + f.expected_excess(x.front())));
  for (std::size_t i = 1; i < n; ++i) {
    const double lo = x[i - 1];
    const double hi = x[i];
    if (hi == lo) continue;
    const double c = static_cast<double>(i) / static_cast<double>(n);
    const double s = static_cast<double>(n - i) / static_cast<double>(n);
    // F < c left of the crossing, F >= c right of it
    const double cross = std::clamp(f.quantile(c), lo, hi);
    const double g_lo = f.expected_excess(lo);
    const double g_cross = f.expected_excess(cross);
    const double g_hi = f.expected_excess(hi);
    total.add(std::max(0.0, g_lo - g_cross - s * (cross - lo)));
    total.add(std::max(0.0, s * (hi - cross) - (g_cross - g_hi)));
  }
  // [x_n, inf): F_n = 1, contributes E[(X - x_n)^+]
  total.add(f.expected_excess(x.back()));
  return total.value();
}

/// Test functions for plug-in estimates  (1/m) sum h(R_i).
struct HFunction {
  enum class Kind { kIdentity, kAbs, kPower, kIndicatorGt, kClipped };

  Kind kind = Kind::kIdentity;
  double param = 0.0;

  static HFunction identity() { return {Kind::kIdentity, 0.0}; }
  static HFunction abs() { return {Kind::kAbs, 0.0}; }
  /// |x|^p, p >= 1.
  static HFunction power(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("power(p): requires p >= 1");
    return {Kind::kPower, p};
  }
  /// 1(x > t).
  static HFunction indicator_gt(double t) { return {Kind::kIndicatorGt, t}; }
  /// x clamped to [-M, M].
  static HFunction clipped(double bound) {
    if (!(bound > 0.0)) throw std::invalid_argument("clipped(M): requires M > 0");
    return {Kind::kClipped, bound};
  }

  /// Parses "identity", "abs", "power(p)", "indicator_gt(t)", "clipped(M)".
  static HFunction parse(const std::string& text) {
    const auto open = text.find('(');
    const std::string name = text.substr(0, open);
    double arg = std::numeric_limits<double>::quiet_NaN();
    if (open != std::string::npos) {
      const auto close = text.find(')', open);
      if (close == std::string::npos || close + 1 != text.size()) {
        throw std::invalid_argument("malformed h function: '" + text + "'");
      }
      try {
        std::size_t used = 0;
        const std::string inner = text.substr(open + 1, close - open - 1);
        arg = std::stod(inner, &used);
        if (used != inner.size()) throw std::invalid_argument(inner);
      } catch (const std::exception&) {
        throw std::invalid_argument("malformed h function argument: '" + text + "'");
      }
    }
    const bool has_arg = open != std::string::npos;
    if (name == "identity" && !has_arg) return identity();
    if (name == "abs" && !has_arg) return abs();
    if (name == "power" && has_arg) return power(arg);
    if (name == "indicator_gt" && has_arg) return indicator_gt(arg);
    if (name == "clipped" && has_arg) return clipped(arg);
    throw std::invalid_argument("unknown h function: '" + text + "'");
  }

  double operator()(double x) const {
    switch (kind) {
      case Kind::kIdentity: return x;
      case Kind::kAbs: return std::abs(x);
      case Kind::kPower: return std::pow(std::abs(x), param);
      case Kind::kIndicatorGt: return x > param ? 1.0 : 0.0;
      case Kind::kClipped: return std::clamp(x, -param, param);
    }
    return 0.0;
  }

  /// Continuous with |h(x)| <= C (1 + |x|): the class for which the plug-in
  /// estimator is known to be consistent.
  bool within_guarantee() const {
    switch (kind) {
      case Kind::kIdentity:
      case Kind::kAbs:
      case Kind::kClipped:
        return true;
      case Kind::kPower: return param == 1.0;
      case Kind::kIndicatorGt: return false;
    }
    return false;
  }

  std::string name() const {
    switch (kind) {
      case Kind::kIdentity: return "identity";
      case Kind::kAbs: return "abs";
      case Kind::kPower: return "power(" + format_shortest(param) + ")";
      case Kind::kIndicatorGt: return "indicator_gt(" + format_shortest(param) + ")";
      case Kind::kClipped: return "clipped(" + format_shortest(param) + ")";
    }
    return "?";
  }
};

inline double estimate_h(std::span<const double> values, const HFunction& h) {
  if (values.empty()) throw std::invalid_argument("estimate_h: empty sample");
  KahanSum s;
  for (const double v : values) s.add(h(v));
  return s.value() / static_cast<double>(values.size());
}

inline double estimate_h(const SamplePool& pool, const HFunction& h) { return estimate_h(pool.values, h); }

namespace detail {

inline void require_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw std::invalid_argument("alpha must lie in (1, 2)");
}

}  // namespace detail

/// 2 alpha / (alpha - 1) + 2 / (2 - alpha).
inline double alpha_factor(double alpha) {
  detail::require_alpha(alpha);
  return 2.0 * alpha / (alpha - 1.0) + 2.0 / (2.0 - alpha);
}

/// Upper bound on E[d1(F_n, F)] for n i.i.d. draws with E|X|^alpha = moment.
inline double empirical_d1_bound(std::size_t n, double alpha, double moment) {
  if (n == 0) throw std::invalid_argument("empirical_d1_bound: n must be >= 1");
  if (!(moment >= 0.0) || !std::isfinite(moment)) {
    throw std::invalid_argument("empirical_d1_bound: moment must be finite and >= 0");
  }
  return std::pow(static_cast<double>(n), -1.0 + 1.0 / alpha) * alpha_factor(alpha) * moment;
}

/// K_alpha = H_alpha * alpha_factor(alpha), with H_alpha = sup_k E|R^(k)|^alpha.
inline double k_alpha_constant(double h_alpha, double alpha) { return h_alpha * alpha_factor(alpha); }

/// Upper bound on E[d1(pool_k(m), F_k)]:  K_alpha m^(-1+1/alpha) sum_{i<=k} rho_1^i.
inline double theorem_bound(int k, std::size_t m, double alpha, double k_alpha, double rho_1) {
  detail::require_alpha(alpha);
  if (k < 0) throw std::invalid_argument("theorem_bound: k must be >= 0");
  if (m == 0) throw std::invalid_argument("theorem_bound: m must be >= 1");
  if (!(k_alpha >= 0.0) || !(rho_1 >= 0.0)) {
    throw std::invalid_argument("theorem_bound: constants must be nonnegative");
  }
  double geometric = 0.0;
  double term = 1.0;
  for (int i = 0; i <= k; ++i) {
    geometric += term;
    term *= rho_1;
  }
  return k_alpha * std::pow(static_cast<double>(m), -1.0 + 1.0 / alpha) * geometric;
}

}  // namespace brsim
