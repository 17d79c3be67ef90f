#pragma once

// Experiment commands behind the `brsim` tool. Each writes its files into
// config.out_dir and returns a RunSummary; warnings go to `log` and never
// change numerical output.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "brsim/asymptotics.hpp"
#include "brsim/bootstrap.hpp"
#include "brsim/config.hpp"
#include "brsim/exact.hpp"
#include "brsim/io.hpp"
#include "brsim/metrics.hpp"
#include "brsim/model.hpp"

namespace brsim {

/// Naive run refused because its expected cost exceeds the budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSummary {
  std::uint64_t vector_draws = 0;
  std::uint64_t q_draws = 0;
  double elapsed = 0.0;  // seconds; reported on stdout only
  std::vector<std::string> outputs;
  MomentReport condition_report;
  std::vector<std::string> warnings;
  Summary values;  // contents of summary.txt
};

namespace detail {

class CommandRun {
 public:
  CommandRun(const char* command, const ExperimentConfig& cfg, std::ostream& log)
      : cfg_(cfg), log_(log), start_(std::chrono::steady_clock::now()) {
    const BranchingVectorSpec& spec = cfg.spec();
    out_.values.set("command", command);
    out_.values.set("model", spec.canonical());
    out_.values.set("model_hash", hex64(spec.hash()));
    out_.condition_report = check_conditions(spec, cfg.beta);
    const MomentReport& r = out_.condition_report;
    out_.values.set("condition.beta", r.beta);
    out_.values.set("condition.case", to_string(r.condition));
    out_.values.set("condition.rho_1", r.rho_1);
    out_.values.set("condition.rho_beta", r.rho_beta);
    out_.values.set("condition.q_abs_moment", r.q_abs_moment);
    out_.values.set("condition.q_mean", r.q_mean);
    out_.values.set("condition.reason", r.reason);
    if (r.condition == ConditionCase::kFail) {
      warn("convergence conditions not met at beta=" + format_shortest(r.beta) + ": " + r.reason);
    }
  }

  const ExperimentConfig& cfg() const { return cfg_; }
  const BranchingVectorSpec& spec() const { return cfg_.spec(); }
  Summary& values() { return out_.values; }
  double condition_rho_1() const { return out_.condition_report.rho_1; }
  DrawCounter& counter() { return counter_; }
  unsigned workers() const { return cfg_.workers == 0 ? default_workers() : cfg_.workers; }

  RunHeader header(std::uint64_t seed, std::size_t m, const std::string& note = "") const {
    return RunHeader{spec().hash(), seed, cfg_.k, m, note};
  }

  void warn(const std::string& message) {
    out_.warnings.push_back(message);
    log_ << "warning: " << message << "\n";
  }

  void write(const std::string& name, const std::string& content) {
    write_output(cfg_.out_dir, name, content);
    out_.outputs.push_back(name);
  }

  /// Refuses runs whose expected tree cost is above the budget; warns above half of it.
  void check_naive_budget(std::size_t reps, const std::string& what) {
    double per_sample = 0.0;
    try {
      per_sample = expected_node_count(spec(), cfg_.k);
    } catch (const UnsupportedMoment&) {
      warn(what + ": E[N] is infinite, expected cost unbounded; relying on node_budget per sample");
      return;
    }
    const double expected = per_sample * static_cast<double>(reps);
    out_.values.set(what + ".expected_vector_draws", expected);
    if (expected > cfg_.budget) {
      throw BudgetError(what + ": expected cost " + format_shortest(expected) + " vector draws (" +
                        std::to_string(reps) + " x " + format_shortest(per_sample) + ") exceeds budget " +
                        format_shortest(cfg_.budget));
    }
    if (expected > 0.5 * cfg_.budget) {
      warn(what + ": expected cost " + format_shortest(expected) + " vector draws is close to budget " +
           format_shortest(cfg_.budget));
    }
  }

  /// Valid exact samples; truncated trees are dropped with a warning.
  std::vector<double> exact_samples(std::size_t reps, const std::string& what, std::uint64_t& nodes) {
    const auto runs = run_exact(spec(), cfg_.k, reps, cfg_.seed_value(), counter_, cfg_.node_budget, workers());
    std::vector<double> values;
    values.reserve(runs.size());
    nodes = 0;
    std::uint64_t truncated = 0;
    for (const auto& r : runs) {
      nodes += r.nodes_visited;
      if (r.truncated) {
        ++truncated;
      } else {
        values.push_back(r.r_k);
      }
    }
    out_.values.set(what + ".nodes_visited", nodes);
    out_.values.set(what + ".truncated", truncated);
    if (truncated > 0) {
      warn(what + ": " + std::to_string(truncated) + " of " + std::to_string(reps) +
           " trees exceeded node_budget and were dropped");
    }
    if (values.empty()) throw std::runtime_error(what + ": every tree exceeded node_budget");
    return values;
  }

  RunSummary finish() {
    out_.vector_draws = counter_.vector_draws();
    out_.q_draws = counter_.q_draws();
    out_.values.set("vector_draws", out_.vector_draws);
    out_.values.set("q_draws", out_.q_draws);
    out_.values.set("warnings", static_cast<std::uint64_t>(out_.warnings.size()));
    std::string files;
    for (const auto& f : out_.outputs) files += (files.empty() ? "" : ",") + f;
    files += (files.empty() ? "" : ",") + std::string("summary.txt");
    out_.values.set("outputs", files);
    write_output(cfg_.out_dir, "summary.txt", out_.values.text());
    out_.outputs.push_back("summary.txt");
    out_.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return std::move(out_);
  }

 private:
  const ExperimentConfig& cfg_;
  std::ostream& log_;
  std::chrono::steady_clock::time_point start_;
  DrawCounter counter_;
  RunSummary out_;
};

inline std::string suffix(std::size_t reps, std::size_t r) {
  return reps == 1 ? std::string() : "_r" + std::to_string(r);
}

struct WaldInterval {
  double p, lo, hi;
};

inline WaldInterval wald95(double p, std::size_t n) {
  const double half = 1.959963984540054 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return {p, p - half, p + half};
}

inline void record_tail(Summary& s, const std::string& prefix, const EmpiricalDistribution& e,
                        const std::vector<double>& xs) {
  for (const double x : xs) {
    const WaldInterval w = wald95(1.0 - e.cdf(x), e.size());
    const std::string key = prefix + ".x=" + format_shortest(x);
    s.set(key, w.p);
    s.set(key + ".ci_low", w.lo);
    s.set(key + ".ci_high", w.hi);
  }
}

}  // namespace detail

/// Bootstrap pools P^(k,m): pool and ECDF files per replicate.
inline RunSummary cmd_bootstrap(const ExperimentConfig& cfg, std::ostream& log) {
  detail::CommandRun run("bootstrap", cfg, log);
  const std::uint64_t seed = cfg.seed_value();
  run.values().set("seed", seed);
  run.values().set("k", cfg.k);
  run.values().set("m", static_cast<std::uint64_t>(cfg.m));
  run.values().set("reps", static_cast<std::uint64_t>(cfg.reps));
  run.values().set("expected_vector_draws", static_cast<std::uint64_t>(cfg.k) * cfg.m * cfg.reps);
  for (std::size_t r = 0; r < cfg.reps; ++r) {
    const std::uint64_t s = replicate_seed(seed, r);
    const SamplePool pool = bootstrap_final_pool(run.spec(), cfg.k, cfg.m, s, run.counter(), run.workers());
    const RunHeader h = run.header(s, cfg.m, "level=" + std::to_string(pool.level));
    const std::string sfx = detail::suffix(cfg.reps, r);
    run.write("pool" + sfx + ".csv", pool_csv(h, pool.values));
    const EmpiricalDistribution e(pool);
    run.write("ecdf" + sfx + ".csv", ecdf_csv(h, e));
    run.values().set("pool" + sfx + ".mean", e.mean());
  }
  return run.finish();
}

/// `reps` exact samples of R^(k).
inline RunSummary cmd_naive(const ExperimentConfig& cfg, std::ostream& log) {
  detail::CommandRun run("naive", cfg, log);
  const std::uint64_t seed = cfg.seed_value();
  run.values().set("seed", seed);
  run.values().set("k", cfg.k);
  run.values().set("reps", static_cast<std::uint64_t>(cfg.reps));
  run.check_naive_budget(cfg.reps, "naive");
  std::uint64_t nodes = 0;
  const std::vector<double> samples = run.exact_samples(cfg.reps, "naive", nodes);
  const RunHeader h = run.header(seed, samples.size(), "exact");
  run.write("naive_samples.csv", pool_csv(h, samples));
  const EmpiricalDistribution e(samples);
  run.write("naive_ecdf.csv", ecdf_csv(h, e));
  run.values().set("naive.mean", e.mean());
  return run.finish();
}

/// Bootstrap pools for each m in m_list against an exact reference: ECDFs,
/// a distance table and, for zeta-distributed N, tails with the asymptotic overlay.
inline RunSummary cmd_compare(const ExperimentConfig& cfg, std::ostream& log) {
  detail::CommandRun run("compare", cfg, log);
  const BranchingVectorSpec& spec = run.spec();
  const std::uint64_t seed = cfg.seed_value();
  run.values().set("seed", seed);
  run.values().set("k", cfg.k);
  run.values().set("reference.reps", static_cast<std::uint64_t>(cfg.reference_reps));

  run.check_naive_budget(cfg.reference_reps, "reference");
  std::uint64_t nodes = 0;
  const EmpiricalDistribution reference(run.exact_samples(cfg.reference_reps, "reference", nodes));
  const RunHeader ref_header = run.header(seed, reference.size(), "exact");
  run.write("ecdf_naive.csv", ecdf_csv(ref_header, reference));

  const bool tails = spec.variant() == Variant::kIndependent && spec.n().kind() == DistributionKind::kZeta;
  if (tails) {
    run.write("tail_naive.csv", tail_csv(ref_header, reference, cfg.tail_x_max));
    detail::record_tail(run.values(), "tail.naive", reference, cfg.tail_x);
  }

  const bool with_bound = cfg.bound_alpha && cfg.bound_k_alpha;
  std::string table = run.header(seed, 0, "distance").line() + "m,d1,bound\n";
  const std::uint64_t before = run.counter().vector_draws();
  std::uint64_t expected_pool_draws = 0;
  for (const std::size_t m : cfg.m_list) {
    const SamplePool pool = bootstrap_final_pool(spec, cfg.k, m, seed, run.counter(), run.workers());
    expected_pool_draws += static_cast<std::uint64_t>(cfg.k) * m;
    const EmpiricalDistribution e(pool);
    const RunHeader h = run.header(seed, m, "level=" + std::to_string(cfg.k));
    const std::string tag = "m" + std::to_string(m);
    run.write("ecdf_" + tag + ".csv", ecdf_csv(h, e));
    const double d1 = d1_empirical(e, reference);
    std::string bound;
    if (with_bound) {
      bound = format_real(theorem_bound(cfg.k, m, *cfg.bound_alpha, *cfg.bound_k_alpha, run.condition_rho_1()));
    }
    table += std::to_string(m) + "," + format_real(d1) + "," + bound + "\n";
    run.values().set("d1." + tag, d1);
    if (tails) {
      run.write("tail_" + tag + ".csv", tail_csv(h, e, cfg.tail_x_max));
      detail::record_tail(run.values(), "tail." + tag, e, cfg.tail_x);
    }
  }
  run.write("distance.csv", table);
  run.values().set("bootstrap.vector_draws", run.counter().vector_draws() - before);
  run.values().set("bootstrap.expected_vector_draws", expected_pool_draws);

  if (tails) {
    const RunHeader h = run.header(seed, 0, "asymptotic");
    auto emit = [&](const std::string& name, double coefficient) {
      const TailAsymptotic t{0.0, coefficient, cfg.k};
      run.values().set("tail.coefficient." + name, coefficient);
      run.write("g_k_" + name + ".csv", g_k_csv(h, g_k_curve(1, cfg.tail_x_max, t, spec.n())));
    };
    if (cfg.tail_inputs) {
      const TailInputs& in = *cfg.tail_inputs;
      emit("printed", in.printed_coefficient);
      emit("recomputed", tail_coefficient(in.ec_eq, 1.0, in.rho_1, in.rho_alpha, in.alpha, cfg.k));
    }
    // The same formula with every input taken from the model, at the
    // printed alpha and at the tail index s - 1 of N.
    try {
      const double ec_eq = spec.c().mean() * spec.q().mean();
      const double rho_1 = rho(spec, 1.0);
      if (rho_1 < 1.0) {
        std::vector<double> alphas;
        if (cfg.tail_inputs) alphas.push_back(cfg.tail_inputs->alpha);
        alphas.push_back(spec.n().p1() - 1.0);
        for (const double a : alphas) {
          const double rho_a = spec.n().mean() * spec.c().abs_moment(a);
          const std::string key = "tail.coefficient.model_alpha=" + format_shortest(a);
          run.values().set(key, tail_coefficient(ec_eq, 1.0, rho_1, rho_a, a, cfg.k));
          run.values().set(key + ".rho_alpha", rho_a);
        }
      }
    } catch (const UnsupportedMoment& e) {
      run.warn(std::string("model-derived tail coefficient unavailable: ") + e.what());
    }
  }
  return run.finish();
}

/// Plug-in estimate of E[h(R^(k))] over `reps` independent bootstrap runs.
inline RunSummary cmd_estimate(const ExperimentConfig& cfg, std::ostream& log) {
  detail::CommandRun run("estimate", cfg, log);
  const HFunction h = HFunction::parse(cfg.h);
  const std::uint64_t seed = cfg.seed_value();
  run.values().set("seed", seed);
  run.values().set("k", cfg.k);
  run.values().set("m", static_cast<std::uint64_t>(cfg.m));
  run.values().set("reps", static_cast<std::uint64_t>(cfg.reps));
  run.values().set("h", h.name());
  run.values().set("h.guarantee", h.within_guarantee() ? "within_guarantee" : "outside_guarantee");
  if (!h.within_guarantee()) run.warn("h = " + h.name() + " is outside the class with a consistency guarantee");
  run.values().set("expected_vector_draws", static_cast<std::uint64_t>(cfg.k) * cfg.m * cfg.reps);

  std::vector<double> estimates;
  std::string rows = run.header(seed, cfg.m, "h=" + h.name()).line() + "replicate,seed,estimate\n";
  double pool_se = 0.0;
  for (std::size_t r = 0; r < cfg.reps; ++r) {
    const std::uint64_t s = replicate_seed(seed, r);
    const SamplePool pool = bootstrap_final_pool(run.spec(), cfg.k, cfg.m, s, run.counter(), run.workers());
    const double est = estimate_h(pool, h);
    estimates.push_back(est);
    rows += std::to_string(r) + "," + std::to_string(s) + "," + format_real(est) + "\n";
    if (cfg.reps == 1) {
      KahanSum ss;
      for (const double v : pool.values) ss.add((h(v) - est) * (h(v) - est));
      const double n = static_cast<double>(pool.m());
      pool_se = pool.m() > 1 ? std::sqrt(ss.value() / (n - 1.0) / n) : 0.0;
    }
  }
  run.write("estimates.csv", rows);

  KahanSum sum;
  for (const double e : estimates) sum.add(e);
  const double mean = sum.value() / static_cast<double>(estimates.size());
  double se = pool_se;
  if (estimates.size() > 1) {
    KahanSum ss;
    for (const double e : estimates) ss.add((e - mean) * (e - mean));
    const double n = static_cast<double>(estimates.size());
    se = std::sqrt(ss.value() / (n - 1.0) / n);
  }
  run.values().set("estimate.mean", mean);
  run.values().set("estimate.se", se);
  run.values().set("estimate.se_method", estimates.size() > 1 ? "replicates" : "within_pool");
  run.values().set("estimate.ci95_low", mean - 1.959963984540054 * se);
  run.values().set("estimate.ci95_high", mean + 1.959963984540054 * se);

  if (!cfg.reference_path.empty()) {
    const std::vector<double> ref = read_values(cfg.reference_path);
    const double oracle = estimate_h(ref, h);
    run.values().set("oracle.n", static_cast<std::uint64_t>(ref.size()));
    run.values().set("oracle.value", oracle);
    run.values().set("oracle.abs_error", std::abs(mean - oracle));
    run.values().set("oracle.within_ci95", std::abs(mean - oracle) <= 1.959963984540054 * se);
  }
  return run.finish();
}

/// Moment conditions only.
inline RunSummary cmd_check(const ExperimentConfig& cfg, std::ostream& log) {
  detail::CommandRun run("check", cfg, log);
  try {
    run.values().set("expected_node_count", expected_node_count(run.spec(), cfg.k));
  } catch (const UnsupportedMoment&) {
    run.values().set("expected_node_count", "inf");
  }
  run.values().set("k", cfg.k);
  return run.finish();
}

}  // namespace brsim
