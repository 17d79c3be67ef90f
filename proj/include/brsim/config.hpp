#pragma once

// Experiment configuration: a flat `key = value` text format with optional
// `[section]` headers that prefix the keys below them, plus built-in presets.
//
//   # Example 1
//   seed = 1
//   k = 10
//   m = 1000
//   [model.q]
//   type = uniform
//   a = 0
//   b = 1
//
// Model keys: model.variant (independent | quicksort | homogeneous) and, per
// component X in {q, n, c}, model.X.type with its parameters:
//   constant: value   uniform: a, b   exponential: rate
//   poisson: mean     zeta: s         bernoulli: p

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "brsim/metrics.hpp"
#include "brsim/model.hpp"

namespace brsim {

/// Invalid configuration; the message names the offending key and line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string value;
  std::string origin;  // "file:line" or "preset name"
};

using ConfigMap = std::map<std::string, ConfigEntry>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace detail

/// Parses config text into `into`; later keys override earlier ones.
inline void parse_config_text(const std::string& text, const std::string& source, ConfigMap& into) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header '" + line + "'");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
    std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (value.empty()) throw ConfigError(where + ": key '" + key + "' has no value");
    if (!section.empty()) key = section + "." + key;
    into[key] = {value, where};
  }
}

inline ConfigMap parse_config_text(const std::string& text, const std::string& source = "<config>") {
  ConfigMap map;
  parse_config_text(text, source, map);
  return map;
}

inline void load_config_file(const std::string& path, ConfigMap& into) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  parse_config_text(buf.str(), path, into);
}

/// Names accepted by preset_text().
inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"example1", "example1-naive", "figure1", "figure2", "quicksort"};
  return names;
}

/// Config text of a built-in preset.
inline std::string preset_text(const std::string& name) {
  static const std::string kExample1Model =
      "model.variant = independent\n"
      "model.q.type = uniform\nmodel.q.a = 0\nmodel.q.b = 1\n"
      "model.n.type = poisson\nmodel.n.mean = 3\n"
      "model.c.type = uniform\nmodel.c.a = 0\nmodel.c.b = 0.2\n";
  if (name == "example1") return kExample1Model + "k = 10\nm = 1000\nseed = 1\nbeta = 2\n";
  if (name == "example1-naive") return kExample1Model + "k = 10\nreps = 1000\nseed = 1\nbeta = 2\n";
  if (name == "figure1") {
    return kExample1Model + "k = 10\nm = 1000\nm_list = 200, 1000\nreference.reps = 1000\nseed = 1\nbeta = 2\n";
  }
  if (name == "figure2") {
    return "model.variant = independent\n"
           "model.q.type = exponential\nmodel.q.rate = 1\n"
           "model.n.type = zeta\nmodel.n.s = 2.5\n"
           "model.c.type = uniform\nmodel.c.a = 0\nmodel.c.b = 0.5\n"
           "k = 10\nm = 10000\nm_list = 10000\nreference.reps = 10000\nseed = 1\n"
           // E[N^beta] is finite only for beta < 1.5
           "beta = 1.25\n"
           "tail.x = 2, 4, 8, 16\ntail.x_max = 200\n"
           "tail.printed_coefficient = 0.365\n"
           "tail.ec_eq = 0.25\ntail.rho_1 = 0.49\ntail.rho_alpha = 0.07\ntail.alpha = 2.5\n";
  }
  if (name == "quicksort") return "model.variant = quicksort\nk = 10\nm = 1000\nseed = 1\nbeta = 2\n";
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

/// Printed constants of the tail asymptotic, as given for the figure-2 model.
struct TailInputs {
  double printed_coefficient = 0.0;
  double ec_eq = 0.0;
  double rho_1 = 0.0;
  double rho_alpha = 0.0;
  double alpha = 0.0;
};

struct ExperimentConfig {
  std::optional<BranchingVectorSpec> model;
  int k = 10;
  std::size_t m = 1000;
  std::vector<std::size_t> m_list;  // compare; defaults to {m}
  std::size_t reps = 1;
  std::optional<std::uint64_t> seed;
  std::size_t reference_reps = 1000;
  std::string h = "identity";
  double beta = 2.0;
  std::vector<double> tail_x = {2, 4, 8, 16};
  int tail_x_max = 100;
  std::optional<TailInputs> tail_inputs;
  double budget = 1e8;
  std::uint64_t node_budget = 10'000'000;
  std::optional<double> bound_alpha;
  std::optional<double> bound_k_alpha;
  std::string reference_path;
  unsigned workers = 0;  // 0: hardware concurrency
  std::string out_dir = "out";

  const BranchingVectorSpec& spec() const {
    if (!model) throw ConfigError("no model configured (set model.* keys or use --preset)");
    return *model;
  }
  std::uint64_t seed_value() const {
    if (!seed) throw ConfigError("key 'seed' is required (runs are never seeded from the clock)");
    return *seed;
  }
};

namespace detail {

class ConfigReader {
 public:
  explicit ConfigReader(const ConfigMap& map) : map_(map) {}

  bool has(const std::string& key) const { return map_.count(key) > 0; }

  const std::string& text(const std::string& key) {
    used_.insert(key);
    return map_.at(key).value;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const auto it = map_.find(key);
    const std::string where = it == map_.end() ? "" : it->second.origin + ": ";
    throw ConfigError(where + "key '" + key + "': " + what);
  }

  double real(const std::string& key) {
    const std::string& s = text(key);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) fail(key, "expected a number, got '" + s + "'");
    return v;
  }

  std::uint64_t count(const std::string& key, const std::string& s) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size()) return v;
    double d = 0.0;
    const auto [q, ec2] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec2 == std::errc() && q == s.data() + s.size() && d >= 0.0 && d <= 9007199254740992.0 && std::floor(d) == d) {
      return static_cast<std::uint64_t>(d);
    }
    fail(key, "expected a nonnegative integer, got '" + s + "'");
  }

  std::uint64_t count(const std::string& key) { return count(key, text(key)); }

  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (const auto& [key, entry] : map_) {
      if (!used_.count(key)) out.push_back(key);
    }
    return out;
  }

 private:
  const ConfigMap& map_;
  std::set<std::string> used_;
};

inline DistributionSpec read_distribution(ConfigReader& r, const std::string& prefix) {
  const std::string type_key = prefix + ".type";
  if (!r.has(type_key)) r.fail(type_key, "missing (required for the independent variant)");
  const std::string type = r.text(type_key);
  auto param = [&](const std::string& name) {
    const std::string key = prefix + "." + name;
    if (!r.has(key)) r.fail(type_key, type + " needs parameter '" + key + "'");
    return r.real(key);
  };
  try {
    if (type == "constant") return DistributionSpec::constant(param("value"));
    if (type == "uniform") return DistributionSpec::uniform(param("a"), param("b"));
    if (type == "exponential") return DistributionSpec::exponential(param("rate"));
    if (type == "poisson") return DistributionSpec::poisson(param("mean"));
    if (type == "zeta") return DistributionSpec::zeta(param("s"));
    if (type == "bernoulli") return DistributionSpec::bernoulli(param("p"));
  } catch (const InvalidSpec& e) {
    r.fail(type_key, e.what());
  }
  r.fail(type_key, "unknown distribution type '" + type +
                       "' (expected constant, uniform, exponential, poisson, zeta or bernoulli)");
}

}  // namespace detail

/// Builds and validates an ExperimentConfig. Unknown keys are errors.
inline ExperimentConfig build_config(const ConfigMap& map) {
  detail::ConfigReader r(map);
  ExperimentConfig cfg;

  const bool any_model = std::any_of(map.begin(), map.end(), [](const auto& kv) { return kv.first.rfind("model.", 0) == 0; });
  if (any_model) {
    const std::string variant = r.has("model.variant") ? r.text("model.variant") : "independent";
    try {
      if (variant == "quicksort") {
        cfg.model = BranchingVectorSpec::quicksort();
      } else if (variant == "homogeneous") {
        auto n = detail::read_distribution(r, "model.n");
        auto c = detail::read_distribution(r, "model.c");
        cfg.model = BranchingVectorSpec::homogeneous(n, c);
      } else if (variant == "independent") {
        auto q = detail::read_distribution(r, "model.q");
        auto n = detail::read_distribution(r, "model.n");
        auto c = detail::read_distribution(r, "model.c");
        cfg.model = BranchingVectorSpec::independent(q, n, c);
      } else {
        r.fail("model.variant", "unknown variant '" + variant + "' (expected independent, quicksort or homogeneous)");
      }
    } catch (const InvalidSpec& e) {
      r.fail(map.count("model.n.type") ? "model.n.type" : "model.variant", e.what());
    }
  }

  if (r.has("k")) {
    const auto k = r.count("k");
    if (k > 1000) r.fail("k", "depth must be <= 1000");
    cfg.k = static_cast<int>(k);
  }
  if (r.has("m")) {
    cfg.m = r.count("m");
    if (cfg.m == 0) r.fail("m", "pool size must be >= 1");
  }
  if (r.has("m_list")) {
    for (const auto& item : detail::split_list(r.text("m_list"))) {
      const auto v = r.count("m_list", item);
      if (v == 0) r.fail("m_list", "pool sizes must be >= 1");
      cfg.m_list.push_back(v);
    }
  }
  if (cfg.m_list.empty()) cfg.m_list = {cfg.m};
  if (r.has("reps")) {
    cfg.reps = r.count("reps");
    if (cfg.reps == 0) r.fail("reps", "replicate count must be >= 1");
  }
  if (r.has("seed")) cfg.seed = r.count("seed");
  if (r.has("reference.reps")) {
    cfg.reference_reps = r.count("reference.reps");
    if (cfg.reference_reps == 0) r.fail("reference.reps", "must be >= 1");
  }
  if (r.has("reference")) cfg.reference_path = r.text("reference");
  if (r.has("h")) {
    cfg.h = r.text("h");
    try {
      (void)HFunction::parse(cfg.h);
    } catch (const std::invalid_argument& e) {
      r.fail("h", e.what());
    }
  }
  if (r.has("beta")) {
    cfg.beta = r.real("beta");
    if (!(cfg.beta >= 1.0)) r.fail("beta", "must be >= 1");
  }
  if (r.has("tail.x")) {
    cfg.tail_x.clear();
    for (const auto& item : detail::split_list(r.text("tail.x"))) {
      double v = 0.0;
      const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || p != item.data() + item.size()) r.fail("tail.x", "bad number '" + item + "'");
      cfg.tail_x.push_back(v);
    }
  }
  if (r.has("tail.x_max")) cfg.tail_x_max = static_cast<int>(r.count("tail.x_max"));
  const std::vector<std::string> tail_keys = {"tail.printed_coefficient", "tail.ec_eq", "tail.rho_1", "tail.rho_alpha",
                                              "tail.alpha"};
  if (std::any_of(tail_keys.begin(), tail_keys.end(), [&](const auto& k) { return r.has(k); })) {
    for (const auto& k : tail_keys) {
      if (!r.has(k)) r.fail(k, "missing; the tail.* constants must be given together");
    }
    cfg.tail_inputs = TailInputs{r.real("tail.printed_coefficient"), r.real("tail.ec_eq"), r.real("tail.rho_1"),
                                 r.real("tail.rho_alpha"), r.real("tail.alpha")};
  }
  if (r.has("budget")) {
    cfg.budget = r.real("budget");
    if (!(cfg.budget > 0.0)) r.fail("budget", "must be > 0");
  }
  if (r.has("node_budget")) {
    cfg.node_budget = r.count("node_budget");
    if (cfg.node_budget == 0) r.fail("node_budget", "must be >= 1");
  }
  if (r.has("bound.alpha")) {
    cfg.bound_alpha = r.real("bound.alpha");
    if (!(*cfg.bound_alpha > 1.0 && *cfg.bound_alpha < 2.0)) r.fail("bound.alpha", "must lie in (1, 2)");
  }
  if (r.has("bound.k_alpha")) {
    cfg.bound_k_alpha = r.real("bound.k_alpha");
    if (!(*cfg.bound_k_alpha >= 0.0)) r.fail("bound.k_alpha", "must be >= 0");
  }
  if (r.has("workers")) cfg.workers = static_cast<unsigned>(r.count("workers"));
  if (r.has("out")) cfg.out_dir = r.text("out");

  const auto unused = r.unused();
  if (!unused.empty()) r.fail(unused.front(), "unknown key");
  return cfg;
}

}  // namespace brsim
