#pragma once

// The generic branching vector (Q, N, C_1, C_2, ...), its sampler, and the
// analytic moment conditions that guarantee convergence of the recursion
//   R^(k+1) =D sum_{i=1}^N C_i R^(k)_i + Q.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "brsim/distribution.hpp"
#include "brsim/numeric.hpp"
#include "brsim/rng.hpp"

namespace brsim {

enum class Variant {
  kIndependent,  // Q, N, {C_i} mutually independent, C_i i.i.d.
  kQuicksort,    // N = 2, C = (U, 1-U), Q = 1 + 2U ln U + 2(1-U) ln(1-U)
  kHomogeneous,  // no Q; C_i >= 0
};

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::kIndependent: return "independent";
    case Variant::kQuicksort: return "quicksort";
    case Variant::kHomogeneous: return "homogeneous";
  }
  return "?";
}

/// One realization of the branching vector; n is c.size().
struct VectorDraw {
  double q = 0.0;
  std::vector<double> c;

  std::size_t n() const { return c.size(); }
};

/// Mergeable draw counters. Exact under concurrent use.
class DrawCounter {
 public:
  struct Counts {
    std::uint64_t vector_draws = 0;
    std::uint64_t q_draws = 0;
  };

  void add_vectors(std::uint64_t n) { vector_draws_.fetch_add(n, std::memory_order_relaxed); }
  void add_q(std::uint64_t n) { q_draws_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t vector_draws() const { return vector_draws_.load(std::memory_order_relaxed); }
  std::uint64_t q_draws() const { return q_draws_.load(std::memory_order_relaxed); }
  Counts counts() const { return {vector_draws(), q_draws()}; }

 private:
  std::atomic<std::uint64_t> vector_draws_{0};
  std::atomic<std::uint64_t> q_draws_{0};
};

/// The quicksort toll 1 + 2u ln u + 2(1-u) ln(1-u), continuous on [0, 1].
inline double quicksort_toll(double u) {
  auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  return 1.0 + 2.0 * xlogx(u) + 2.0 * xlogx(1.0 - u);
}

/// Law of the generic branching vector.
///
/// For the quicksort variant the component accessors report the marginals
/// N = 2 and C ~ uniform(0,1); Q has no DistributionSpec and q() returns
/// constant(0). Use the free functions below rather than the components.
class BranchingVectorSpec {
 public:
  static BranchingVectorSpec independent(DistributionSpec q, DistributionSpec n, DistributionSpec c) {
    if (!n.integer_valued()) {
      throw InvalidSpec("N must be integer-valued (poisson, zeta, bernoulli or integer constant), got " +
                        n.describe());
    }
    return BranchingVectorSpec(Variant::kIndependent, q, n, c);
  }

  static BranchingVectorSpec homogeneous(DistributionSpec n, DistributionSpec c) {
    if (!n.integer_valued()) {
      throw InvalidSpec("N must be integer-valued (poisson, zeta, bernoulli or integer constant), got " +
                        n.describe());
    }
    if (!c.nonnegative()) throw InvalidSpec("homogeneous variant requires C_i >= 0, got " + c.describe());
    return BranchingVectorSpec(Variant::kHomogeneous, DistributionSpec::constant(0.0), n, c);
  }

  static BranchingVectorSpec quicksort() {
    return BranchingVectorSpec(Variant::kQuicksort, DistributionSpec::constant(0.0), DistributionSpec::constant(2.0),
                               DistributionSpec::uniform(0.0, 1.0));
  }

  Variant variant() const { return variant_; }
  const DistributionSpec& q() const { return q_; }
  const DistributionSpec& n() const { return n_; }
  const DistributionSpec& c() const { return c_; }

  /// Stable text form used for hashing and output headers.
  std::string canonical() const {
    switch (variant_) {
      case Variant::kQuicksort: return "variant=quicksort";
      case Variant::kHomogeneous: return "variant=homogeneous;n=" + n_.describe() + ";c=" + c_.describe();
      case Variant::kIndependent:
        return "variant=independent;q=" + q_.describe() + ";n=" + n_.describe() + ";c=" + c_.describe();
    }
    return {};
  }

  /// FNV-1a 64 of canonical().
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char ch : canonical()) {
      h ^= ch;
      h *= 0x100000001b3ull;
    }
    return h;
  }

 private:
  BranchingVectorSpec(Variant v, DistributionSpec q, DistributionSpec n, DistributionSpec c)
      : variant_(v), q_(q), n_(n), c_(c) {}

  Variant variant_;
  DistributionSpec q_;
  DistributionSpec n_;
  DistributionSpec c_;
};

/// Deterministic quicksort vector for a given shared uniform u.
inline VectorDraw quicksort_vector(double u) { return VectorDraw{quicksort_toll(u), {u, 1.0 - u}}; }

namespace detail {

// Uncounted draw; callers account in bulk.
inline void draw_vector(const BranchingVectorSpec& spec, Stream& rng, VectorDraw& out) {
  out.c.clear();
  switch (spec.variant()) {
    case Variant::kQuicksort: {
      const double u = rng.uniform();
      out.q = quicksort_toll(u);
      out.c.push_back(u);
      out.c.push_back(1.0 - u);
      return;
    }
    case Variant::kHomogeneous:
      out.q = 0.0;
      break;
    case Variant::kIndependent:
      out.q = spec.q().sample(rng);
      break;
  }
  const std::uint64_t n = spec.n().sample_count(rng);
  out.c.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.c.push_back(spec.c().sample(rng));
}

}  // namespace detail

/// Draws one branching vector and counts it.
inline void sample_vector(const BranchingVectorSpec& spec, Stream& rng, VectorDraw& out, DrawCounter& counter) {
  detail::draw_vector(spec, rng, out);
  counter.add_vectors(1);
}

inline VectorDraw sample_vector(const BranchingVectorSpec& spec, Stream& rng, DrawCounter& counter) {
  VectorDraw out;
  sample_vector(spec, rng, out, counter);
  return out;
}

/// Draws only the Q component (the marginal law of Q); uncounted.
inline double sample_q(const BranchingVectorSpec& spec, Stream& rng) {
  switch (spec.variant()) {
    case Variant::kQuicksort: return quicksort_toll(rng.uniform());
    case Variant::kHomogeneous: return 0.0;
    case Variant::kIndependent: return spec.q().sample(rng);
  }
  return 0.0;
}

/// rho_beta = E[sum_{i<=N} |C_i|^beta].
inline double rho(const BranchingVectorSpec& spec, double beta) {
  if (!(beta >= 1.0)) throw std::invalid_argument("rho: requires beta >= 1");
  if (spec.variant() == Variant::kQuicksort) return 2.0 / (beta + 1.0);
  const double mean_n = spec.n().mean();
  if (mean_n == 0.0) return 0.0;
  return mean_n * spec.c().abs_moment(beta);
}

namespace detail {

// Integral of g(quicksort_toll(u)) over [0, 1], using the symmetry
// toll(u) = toll(1-u) and splitting at the sign change of the toll.
template <typename G>
double integrate_quicksort_toll(G g) {
  // toll is decreasing on [0, 1/2] from 1 to 1 - 2 ln 2 < 0
  double lo = 0.0;
  double hi = 0.5;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (quicksort_toll(mid) > 0.0 ? lo : hi) = mid;
  }
  const double root = lo;
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&g](double u) { return g(quicksort_toll(u)); };
  constexpr double kTol = 1e-14;
  const double left = integrator.integrate(f, 0.0, root, kTol);
  const double right = integrator.integrate(f, root, 0.5, kTol);
  return 2.0 * (left + right);
}

}  // namespace detail

/// E[Q^beta] or, with `absolute`, E[|Q|^beta]. beta = 1 non-absolute is E[Q].
inline double q_moment(const BranchingVectorSpec& spec, double beta, bool absolute) {
  if (!(beta >= 1.0)) throw std::invalid_argument("q_moment: requires beta >= 1");
  switch (spec.variant()) {
    case Variant::kHomogeneous: return 0.0;
    case Variant::kIndependent: return absolute ? spec.q().abs_moment(beta) : spec.q().moment(beta);
    case Variant::kQuicksort: {
      if (absolute) return detail::integrate_quicksort_toll([beta](double q) { return std::pow(std::abs(q), beta); });
      if (std::floor(beta) != beta) {
        throw UnsupportedMoment("q_moment: quicksort Q takes negative values; non-integer order needs absolute=true");
      }
      return detail::integrate_quicksort_toll([beta](double q) { return std::pow(q, beta); });
    }
  }
  return 0.0;
}

enum class ConditionCase { kCaseI, kCaseII, kFail };

inline const char* to_string(ConditionCase c) {
  switch (c) {
    case ConditionCase::kCaseI: return "case_i";
    case ConditionCase::kCaseII: return "case_ii";
    case ConditionCase::kFail: return "fail";
  }
  return "?";
}

/// Moment quantities behind the geometric convergence of R^(k) to R.
struct MomentReport {
  double beta = 1.0;
  double rho_1 = 0.0;
  double rho_beta = 0.0;
  double q_abs_moment = 0.0;  // E|Q|^beta
  double q_mean = 0.0;
  ConditionCase condition = ConditionCase::kFail;
  std::string reason;
};

inline constexpr double kConditionTolerance = 1e-12;

/// Classifies the model against the two sufficient regimes:
///   (i)  max(rho_1, rho_beta) < 1
///   (ii) beta = 2, rho_1 = 1, rho_beta < 1, E[Q] = 0
/// together with the finiteness requirements E|Q|^beta < inf and
/// E[(sum_i |C_i|)^beta] < inf.
inline MomentReport check_conditions(const BranchingVectorSpec& spec, double beta) {
  if (!(beta >= 1.0)) throw std::invalid_argument("check_conditions: requires beta >= 1");
  MomentReport report;
  report.beta = beta;
  try {
    report.rho_1 = rho(spec, 1.0);
    report.rho_beta = rho(spec, beta);
    report.q_abs_moment = q_moment(spec, beta, true);
    report.q_mean = q_moment(spec, 1.0, false);
    // (sum_{i<=N} |C_i|)^beta <= N^(beta-1) sum |C_i|^beta, so E[N^beta] < inf
    // suffices; it is also necessary unless C = 0 almost surely.
    const bool c_is_zero = spec.c().kind() == DistributionKind::kConstant && spec.c().p1() == 0.0;
    if (spec.variant() != Variant::kQuicksort && !c_is_zero) (void)spec.n().abs_moment(beta);
  } catch (const UnsupportedMoment& e) {
    report.condition = ConditionCase::kFail;
    report.reason = e.what();
    return report;
  }

  if (std::max(report.rho_1, report.rho_beta) < 1.0) {
    report.condition = ConditionCase::kCaseI;
    report.reason = "max(rho_1, rho_beta) < 1";
  } else if (std::abs(beta - 2.0) <= kConditionTolerance && std::abs(report.rho_1 - 1.0) <= kConditionTolerance &&
             report.rho_beta < 1.0 && std::abs(report.q_mean) <= kConditionTolerance) {
    report.condition = ConditionCase::kCaseII;
    report.reason = "beta = 2, rho_1 = 1, rho_beta < 1, E[Q] = 0";
  } else {
    report.condition = ConditionCase::kFail;
    report.reason = "neither max(rho_1, rho_beta) < 1 nor the critical case (beta = 2, rho_1 = 1, rho_beta < 1, E[Q] = 0)";
  }
  return report;
}

}  // namespace brsim
