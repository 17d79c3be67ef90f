#pragma once

// Output files. Every file starts with a comment line identifying the run,
// numbers use 17 significant digits, and lines end in LF only.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "brsim/metrics.hpp"
#include "brsim/numeric.hpp"

namespace brsim {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct RunHeader {
  std::uint64_t model_hash = 0;
  std::uint64_t seed = 0;
  int k = 0;
  std::size_t m = 0;  // pool size, or sample count for exact runs
  std::string note;   // optional extra fields

  std::string line() const {
    std::string out = "# model_hash=" + hex64(model_hash) + " seed=" + std::to_string(seed) +
                      " k=" + std::to_string(k) + " m=" + std::to_string(m);
    if (!note.empty()) out += " " + note;
    return out + "\n";
  }
};

/// Ordered key = value lines.
class Summary {
 public:
  void set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_) {
      if (k == key) {
        v = value;
        return;
      }
    }
    entries_.emplace_back(key, value);
  }
  void set(const std::string& key, double value) { set(key, format_real(value)); }
  void set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }
  void set(const std::string& key, int value) { set(key, std::to_string(value)); }
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string text() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Writes `content` to dir/name (creating dir) and returns the path.
inline std::string write_output(const std::string& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("write to '" + path + "' failed");
  return path;
}

/// One value per line.
inline std::string pool_csv(const RunHeader& header, const std::vector<double>& values) {
  std::string out = header.line();
  for (const double v : values) out += format_real(v) + "\n";
  return out;
}

/// "x,cdf" at each distinct sample point.
inline std::string ecdf_csv(const RunHeader& header, const EmpiricalDistribution& e) {
  std::string out = header.line() + "x,cdf\n";
  for (const auto& [x, f] : e.ecdf_points()) out += format_real(x) + "," + format_real(f) + "\n";
  return out;
}

/// "x,tail" with tail = fraction of values > x, at x = 1..x_max.
inline std::string tail_csv(const RunHeader& header, const EmpiricalDistribution& e, int x_max) {
  std::string out = header.line() + "x,tail\n";
  for (int x = 1; x <= x_max; ++x) out += std::to_string(x) + "," + format_real(1.0 - e.cdf(x)) + "\n";
  return out;
}

/// "x,g_k" at integer x.
inline std::string g_k_csv(const RunHeader& header, const std::vector<std::pair<double, double>>& curve) {
  std::string out = header.line() + "x,g_k\n";
  for (const auto& [x, g] : curve) out += format_real(x) + "," + format_real(g) + "\n";
  return out;
}

/// Reads the first column of a CSV of numbers; comment lines and a
/// non-numeric header line are skipped.
inline std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reference file '" + path + "'");
  std::vector<double> out;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::string field = line.substr(0, line.find(','));
    double v = 0.0;
    const auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || p != field.data() + field.size()) {
      if (!header_seen && out.empty()) {
        header_seen = true;
        continue;
      }
      throw IoError(path + ":" + std::to_string(line_no) + ": not a number: '" + field + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw IoError("reference file '" + path + "' holds no values");
  return out;
}

}  // namespace brsim
