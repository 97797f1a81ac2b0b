#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace supmatch {

/// Deterministic random generator used everywhere in the toolkit.
///
/// All randomized operations document their draw order in terms of this
/// class so that runs are reproducible from a single integer seed. Only the
/// primitives below are used; standard-library distributions are avoided
/// because their draw sequences are implementation defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in [0, n). n must be >= 1.
  uint64_t bounded(uint64_t n) {
    if (n <= 1) {
      if (n == 1) return 0;
      // n == 0 is a caller bug; consume nothing and return 0.
      return 0;
    }
    const uint64_t threshold = (~n + 1) % n;  // (2^64 - n) % n
    for (;;) {
      const uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  /// One Bernoulli draw: true with probability p. Always consumes one draw.
  bool bernoulli(double p) { return next_unit() < p; }

  /// Independent child stream derived from (original seed, stream id).
  /// Children do not depend on how much the parent has consumed.
  Rng child(uint64_t stream) const { return Rng(mix(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1)))); }

  uint64_t seed() const { return seed_; }

  /// In-place Fisher-Yates shuffle with a documented draw order
  /// (one bounded draw per position, front to back).
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = 0; i + 1 < items.size(); ++i) {
      const size_t j = i + static_cast<size_t>(bounded(items.size() - i));
      std::swap(items[i], items[j]);
    }
  }

 private:
  static uint64_t mix(uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace supmatch
