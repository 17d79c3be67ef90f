#pragma once

// Parametric scalar laws used for the components of a branching vector.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "brsim/numeric.hpp"
#include "brsim/rng.hpp"

namespace brsim {

/// Rejected parameters or ill-formed model descriptions.
class InvalidSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class DistributionKind { kConstant, kUniform, kExponential, kPoisson, kZeta, kBernoulli };

inline const char* to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::kConstant: return "constant";
    case DistributionKind::kUniform: return "uniform";
    case DistributionKind::kExponential: return "exponential";
    case DistributionKind::kPoisson: return "poisson";
    case DistributionKind::kZeta: return "zeta";
    case DistributionKind::kBernoulli: return "bernoulli";
  }
  return "?";
}

/// An immutable, validated scalar law.
///
/// Parameters by kind:
///   constant(value), uniform(a, b) with a < b, exponential(rate > 0),
///   poisson(mean >= 0), zeta(s > 1) with P(X = k) = k^-s / zeta(s) on
///   k = 1, 2, ..., bernoulli(0 <= p <= 1).
class DistributionSpec {
 public:
  static DistributionSpec constant(double value) {
    if (!std::isfinite(value)) throw InvalidSpec("constant: value must be finite");
    return DistributionSpec(DistributionKind::kConstant, value, 0.0);
  }
  static DistributionSpec uniform(double a, double b) {
    if (!(std::isfinite(a) && std::isfinite(b) && a < b)) {
      throw InvalidSpec("uniform: requires finite a < b");
    }
    return DistributionSpec(DistributionKind::kUniform, a, b);
  }
  static DistributionSpec exponential(double rate) {
    if (!(std::isfinite(rate) && rate > 0.0)) throw InvalidSpec("exponential: requires rate > 0");
    return DistributionSpec(DistributionKind::kExponential, rate, 0.0);
  }
  static DistributionSpec poisson(double mean) {
    if (!(std::isfinite(mean) && mean >= 0.0)) throw InvalidSpec("poisson: requires mean >= 0");
    return DistributionSpec(DistributionKind::kPoisson, mean, 0.0);
  }
  static DistributionSpec zeta(double s) {
    if (!(std::isfinite(s) && s > 1.0)) throw InvalidSpec("zeta: requires exponent s > 1");
    return DistributionSpec(DistributionKind::kZeta, s, 0.0);
  }
  static DistributionSpec bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidSpec("bernoulli: requires 0 <= p <= 1");
    return DistributionSpec(DistributionKind::kBernoulli, p, 0.0);
  }

  DistributionKind kind() const { return kind_; }
  /// First parameter: value, a, rate, mean, s or p depending on kind.
  double p1() const { return p1_; }
  /// Second parameter: b for uniform, unused otherwise.
  double p2() const { return p2_; }

  /// True for laws on the nonnegative integers; only these may describe N.
  bool integer_valued() const {
    switch (kind_) {
      case DistributionKind::kPoisson:
      case DistributionKind::kZeta:
      case DistributionKind::kBernoulli:
        return true;
      case DistributionKind::kConstant:
        return p1_ >= 0.0 && std::floor(p1_) == p1_ && p1_ <= 0x1.0p62;
      default:
        return false;
    }
  }

  /// True when the law puts no mass below zero.
  bool nonnegative() const {
    switch (kind_) {
      case DistributionKind::kConstant:
      case DistributionKind::kUniform:
        return p1_ >= 0.0;
      default:
        return true;
    }
  }

  double sample(Stream& rng) const {
    switch (kind_) {
      case DistributionKind::kConstant: return p1_;
      case DistributionKind::kUniform: return p1_ + (p2_ - p1_) * rng.uniform();
      case DistributionKind::kExponential: return -std::log1p(-rng.uniform()) / p1_;
      case DistributionKind::kPoisson: return static_cast<double>(sample_poisson(rng));
      case DistributionKind::kZeta: return static_cast<double>(sample_zeta(rng));
      case DistributionKind::kBernoulli: return rng.uniform() < p1_ ? 1.0 : 0.0;
    }
    return 0.0;
  }

  /// Draw for an integer-valued law.
  std::uint64_t sample_count(Stream& rng) const {
    switch (kind_) {
      case DistributionKind::kConstant: return static_cast<std::uint64_t>(p1_);
      case DistributionKind::kPoisson: return sample_poisson(rng);
      case DistributionKind::kZeta: return sample_zeta(rng);
      case DistributionKind::kBernoulli: return rng.uniform() < p1_ ? 1 : 0;
      default: throw InvalidSpec(std::string("sample_count: ") + to_string(kind_) + " is not integer-valued");
    }
  }

  double mean() const {
    switch (kind_) {
      case DistributionKind::kConstant: return p1_;
      case DistributionKind::kUniform: return 0.5 * (p1_ + p2_);
      case DistributionKind::kExponential: return 1.0 / p1_;
      case DistributionKind::kPoisson: return p1_;
      case DistributionKind::kZeta:
        if (p1_ <= 2.0) throw UnsupportedMoment("zeta(" + format_shortest(p1_) + ") has infinite mean");
        return riemann_zeta(p1_ - 1.0) / zeta_s_;
      case DistributionKind::kBernoulli: return p1_;
    }
    return 0.0;
  }

  /// E|X|^beta for beta > 0.
  double abs_moment(double beta) const {
    if (!(beta > 0.0)) throw std::invalid_argument("abs_moment: requires beta > 0");
    switch (kind_) {
      case DistributionKind::kConstant: return std::pow(std::abs(p1_), beta);
      case DistributionKind::kUniform: {
        // antiderivative of |x|^beta is sign(x)|x|^(beta+1)/(beta+1)
        auto anti = [beta](double x) { return std::copysign(std::pow(std::abs(x), beta + 1.0), x) / (beta + 1.0); };
        return (anti(p2_) - anti(p1_)) / (p2_ - p1_);
      }
      case DistributionKind::kExponential: return std::tgamma(beta + 1.0) / std::pow(p1_, beta);
      case DistributionKind::kPoisson: return poisson_power_moment(beta);
      case DistributionKind::kZeta:
        if (p1_ - beta <= 1.0) {
          throw UnsupportedMoment("zeta(" + format_shortest(p1_) + ") has infinite moment of order " +
                                  format_shortest(beta));
        }
        return riemann_zeta(p1_ - beta) / zeta_s_;
      case DistributionKind::kBernoulli: return p1_;
    }
    return 0.0;
  }

  /// E[X^beta]; defined for nonnegative laws and for integer beta.
  double moment(double beta) const {
    if (beta == 1.0) return mean();
    if (nonnegative()) return abs_moment(beta);
    const bool integer_order = beta > 0.0 && std::floor(beta) == beta;
    if (!integer_order) {
      throw UnsupportedMoment("moment: non-integer order on a law with negative support");
    }
    if (kind_ == DistributionKind::kConstant) return std::pow(p1_, beta);
    // uniform with a < 0
    return (std::pow(p2_, beta + 1.0) - std::pow(p1_, beta + 1.0)) / ((beta + 1.0) * (p2_ - p1_));
  }

  /// Canonical text, e.g. "uniform(0,0.2)".
  std::string describe() const {
    std::string out = std::string(to_string(kind_)) + "(" + format_shortest(p1_);
    if (kind_ == DistributionKind::kUniform) out += "," + format_shortest(p2_);
    return out + ")";
  }

  /// Riemann zeta(s) for the zeta law; NaN otherwise.
  double zeta_normalizer() const { return zeta_s_; }

  friend bool operator==(const DistributionSpec& a, const DistributionSpec& b) {
    return a.kind_ == b.kind_ && a.p1_ == b.p1_ && a.p2_ == b.p2_;
  }

 private:
  DistributionSpec(DistributionKind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {
    if (kind_ == DistributionKind::kZeta) {
      zeta_s_ = riemann_zeta(p1_);
      zeta_b_ = std::exp2(p1_ - 1.0);
    }
    if (kind_ == DistributionKind::kPoisson) {
      poisson_pieces_ = p1_ <= 10.0 ? 1 : static_cast<std::uint64_t>(std::ceil(p1_ / 10.0));
      poisson_piece_mean_ = p1_ / static_cast<double>(poisson_pieces_);
      poisson_p0_ = std::exp(-poisson_piece_mean_);
    }
  }

  // Inversion by sequential search; means above 10 are split into
  // independent pieces of mean <= 10 so exp(-mean) never underflows.
  std::uint64_t sample_poisson(Stream& rng) const {
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < poisson_pieces_; ++i) total += poisson_inversion(poisson_piece_mean_, poisson_p0_, rng);
    return total;
  }

  static std::uint64_t poisson_inversion(double mean, double p0, Stream& rng) {
    const double u = rng.uniform();
    double p = p0;
    double cdf = p;
    std::uint64_t k = 0;
    while (u >= cdf) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      // cdf can stall just below 1 in floating point
      if (p < 0x1.0p-60 * cdf && static_cast<double>(k) > mean) break;
    }
    return k;
  }

  // Devroye's rejection sampler for the zeta (Zipf) law; no truncation.
  std::uint64_t sample_zeta(Stream& rng) const {
    const double s1 = p1_ - 1.0;
    for (;;) {
      const double u = rng.uniform_open();
      const double v = rng.uniform();
      const double x = std::floor(std::pow(u, -1.0 / s1));
      if (!(x < 0x1.0p63)) continue;
      const double t = std::pow(1.0 + 1.0 / x, s1);
      if (v * x * (t - 1.0) / (zeta_b_ - 1.0) <= t / zeta_b_) return static_cast<std::uint64_t>(x);
    }
  }

  double poisson_power_moment(double beta) const {
    const double mean = p1_;
    if (mean == 0.0) return 0.0;
    if (beta == 1.0) return mean;
    const double upper = mean + 40.0 * std::sqrt(mean) + 60.0;
    KahanSum sum;
    for (double k = 1.0; k <= upper; k += 1.0) {
      const double log_pmf = k * std::log(mean) - mean - std::lgamma(k + 1.0);
      sum.add(std::exp(log_pmf + beta * std::log(k)));
    }
    return sum.value();
  }

  DistributionKind kind_;
  double p1_;
  double p2_;
  double zeta_s_ = std::numeric_limits<double>::quiet_NaN();
  double zeta_b_ = 0.0;
  std::uint64_t poisson_pieces_ = 1;
  double poisson_piece_mean_ = 0.0;
  double poisson_p0_ = 1.0;
};

}  // namespace brsim
