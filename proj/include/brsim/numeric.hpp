#pragma once

// Numerical odds and ends shared by the simulation modules.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

namespace brsim {

/// Thrown when a requested moment or expectation is infinite or has no
/// supported evaluation route.
class UnsupportedMoment : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Neumaier-compensated running sum.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  KahanSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Hurwitz zeta  sum_{k>=0} (a+k)^(-s)  for s > 1, a > 0, by direct summation
/// up to a+N >= 10 followed by an Euler-Maclaurin tail.
inline double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0)) throw std::invalid_argument("hurwitz_zeta: requires s > 1");
  if (!(a > 0.0)) throw std::invalid_argument("hurwitz_zeta: requires a > 0");
  // B_{2j} / (2j)!
  static constexpr double kBernoulliOverFactorial[] = {
      1.0 / 12.0,                 // B2/2!
      -1.0 / 720.0,               // B4/4!
      1.0 / 30240.0,              // B6/6!
      -1.0 / 1209600.0,           // B8/8!
      1.0 / 47900160.0,           // B10/10!
      -691.0 / 1307674368000.0,   // B12/12!
      1.0 / 74724249600.0,        // B14/14!
  };
  constexpr double kCutoff = 10.0;
  KahanSum head;
  double x = a;
  while (x < kCutoff) {
    head.add(std::pow(x, -s));
    x += 1.0;
  }
  double tail = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  // rising factorial s(s+1)...(s+2j-2) times x^(-s-2j+1)
  double term = s * std::pow(x, -s - 1.0);
  for (std::size_t j = 0; j < std::size(kBernoulliOverFactorial); ++j) {
    tail += kBernoulliOverFactorial[j] * term;
    const double p = s + 2.0 * static_cast<double>(j) + 1.0;
    term *= p * (p + 1.0) / (x * x);
  }
  head.add(tail);
  return head.value();
}

/// Riemann zeta for s > 1.
inline double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0); }

/// Locale-independent decimal with 17 significant digits.
inline std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("format_real: conversion failed");
  return std::string(buf, res.ptr);
}

/// Shortest decimal that round-trips; used for canonical names and hashes.
inline std::string format_shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc()) throw std::runtime_error("format_shortest: conversion failed");
  return std::string(buf, res.ptr);
}

/// Runs fn(begin, end) over a static partition of [0, count) using up to
/// `workers` threads. Any partition gives the same result when fn writes
/// only to its own index range.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (count == 0) return;
  const std::size_t chunks = std::clamp<std::size_t>(workers, 1, count);
  if (chunks == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(chunks - 1);
  const std::size_t step = count / chunks;
  const std::size_t extra = count % chunks;
  std::size_t begin = 0;
  std::size_t first_end = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t end = begin + step + (c < extra ? 1 : 0);
    if (c == 0) {
      first_end = end;
    } else {
      threads.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    begin = end;
  }
  fn(std::size_t{0}, first_end);
}

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace brsim
