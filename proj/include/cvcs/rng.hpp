#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace cvcs {

// Counter-based PRNG: SplitMix64 finalizer applied to a (key, counter) pair.
// State is two 64-bit words, so streams can be split cheaply and every draw
// is a pure function of (key, counter). Identical seeds give identical
// sequences on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x9E3779B97F4A7C15ull)), ctr_(0) {}

  std::uint64_t next_u64() {
    std::uint64_t z = key_ + (ctr_++) * 0x9E3779B97F4A7C15ull;
    return mix(z);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n > 0. Rejection sampling, no modulo bias.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  // Independent child stream; drawing from the child never perturbs the parent.
  Rng split(std::uint64_t stream_id) const {
    Rng child(0);
    child.key_ = mix(key_ ^ mix(stream_id + 0xD1B54A32D192ED03ull));
    child.ctr_ = 0;
    return child;
  }

  // Exponential variate with the given rate (inverse-CDF).
  double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t ctr_;
};

// First M entries of a Fisher-Yates shuffle of [0, n), returned sorted.
inline std::vector<int> sample_without_replacement(int n, int m, Rng& rng) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < m; ++i) {
    const int j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace cvcs
