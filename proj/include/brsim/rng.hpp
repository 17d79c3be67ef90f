#pragma once

// Splittable random streams.
//
// A stream is addressed by (key, substream id). Its starting state is the
// Philox4x32-10 image of that address, so per-replicate or per-pool-entry
// streams can be created in any order, on any thread, and still produce the
// same numbers.

#include <array>
#include <cstdint>

namespace brsim {

namespace detail {

inline void mulhilo32(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace detail

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
inline PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    detail::mulhilo32(kM0, ctr[0], hi0, lo0);
    detail::mulhilo32(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// SplitMix64 finalizer; used to fold seeds and tags into stream keys.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Derives a key from a seed and up to two integer tags.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b = 0) {
  return mix64(mix64(mix64(seed) ^ tag_a) ^ (tag_b * 0xD6E8FEB86659FD93ull));
}

/// Domain tags so that different consumers of one experiment seed never
/// share a stream.
enum class StreamTag : std::uint64_t {
  kNaiveTree = 0x6E616976,      // exact tree replicates
  kPoolVector = 0x706F6F6C,     // bootstrap branching-vector draws
  kPoolIndex = 0x696E6478,      // bootstrap resampling indices
  kReplicateSeed = 0x72657073,  // per-replicate experiment seeds
};

constexpr std::uint64_t derive_key(std::uint64_t seed, StreamTag tag, std::uint64_t tag_b = 0) {
  return derive_key(seed, static_cast<std::uint64_t>(tag), tag_b);
}

/// Seed for replicate `r` of an experiment; replicate 0 keeps the experiment seed.
constexpr std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t r) {
  return r == 0 ? seed : derive_key(seed, StreamTag::kReplicateSeed, r);
}

/// One random substream.
///
/// The 256-bit state of a xoshiro256** generator is taken from two Philox
/// blocks at counters (0, id) and (1, id) under `key`, so any substream can be
/// opened directly from (key, id) with no dependence on other substreams.
class Stream {
 public:
  Stream(std::uint64_t key, std::uint64_t substream) {
    const PhiloxKey k{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
    const auto lo = static_cast<std::uint32_t>(substream);
    const auto hi = static_cast<std::uint32_t>(substream >> 32);
    const PhiloxBlock a = philox4x32_10({0, 0, lo, hi}, k);
    const PhiloxBlock b = philox4x32_10({1, 0, lo, hi}, k);
    state_ = {join(a[0], a[1]), join(a[2], a[3]), join(b[0], b[1]), join(b[2], b[3])};
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  /// xoshiro256** (Blackman & Vigna).
  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1); never returns an endpoint.
  double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Exactly uniform integer in [0, bound), bound > 0 (Lemire's method).
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 prod = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        prod = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

 private:
  static constexpr std::uint64_t join(std::uint32_t lo, std::uint32_t hi) {
    return (static_cast<std::uint64_t>(hi) << 32) | lo;
  }
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace brsim
