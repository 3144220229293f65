#pragma once

#include <cstdint>
#include <initializer_list>

namespace punn {

// splitmix64 finalizer (Steele/Lea/Flood; public-domain reference constants).
// Chosen because its output sequence is fully specified and identical on
// every platform, which is what the reproducibility contract needs.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Counter-based stream RNG.  A stream is addressed by (seed, tag...); every
/// estimator, layer initializer and sampler derives its own stream so that
/// runs are bit-reproducible regardless of evaluation order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Derive a sub-stream deterministically from a base seed and tags.
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = seed;
    splitmix64_next(s);
    for (std::uint64_t t : tags) {
      s ^= t + 0x9e3779b97f4a7c15ull + (s << 6) + (s >> 2);
      splitmix64_next(s);
    }
    return Rng(s);
  }

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::uint64_t state_;
};

}  // namespace punn
