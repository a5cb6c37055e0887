#pragma once

#include <cstdint>
#include <stdexcept>

namespace locrank {

/// Master seed plus the derivation rule for per-replication child streams.
/// The same (master, replication) pair always yields the same stream, no
/// matter how many workers run or in which order they pick up replications.
struct SeedSpec {
  std::uint64_t master = 0;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// xoshiro256++ stream, seeded through splitmix64. Fully specified here so
/// that draws are bit-identical across platforms and standard libraries
/// (std::uniform_real_distribution makes no such promise).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = detail::splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal via inverse-cdf (no rejection, so the number of draws
  /// consumed per variate is fixed).
  double normal();

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

/// Hash of (master, salt); used to derive both child streams and the seeds
/// of nested experiments without sharing state.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
  std::uint64_t s = master;
  const std::uint64_t a = detail::splitmix64(s);
  s = a ^ (salt + 0x9e3779b97f4a7c15ULL);
  return detail::splitmix64(s);
}

/// Child stream for one replication. Counter-based: the child seed is a hash
/// of (master, replication), so streams do not share state and parallel
/// execution cannot reorder draws.
inline RandomStream child_stream(SeedSpec seed, std::uint64_t replication) {
  return RandomStream(derive_seed(seed.master, replication));
}

}  // namespace locrank
