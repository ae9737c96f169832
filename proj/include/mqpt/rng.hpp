#ifndef MQPT_RNG_HPP
#define MQPT_RNG_HPP

#include <cmath>
#include <cstdint>

namespace mqpt {

// xorshift64* generator (Marsaglia's xorshift with the 64-bit multiplier
// finisher). The full update is
//
//   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  output = x * 2685821657736338717
//
// which makes streams reproducible from the formula alone, independent of
// any standard-library implementation. Gaussians come from the Box-Muller
// transform on 53-bit uniforms.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed)
      : state_(seed ? seed : 0x9E3779B97F4A7C15ULL), has_cached_(false), cached_(0.0) {
    // warm up so that small seeds decorrelate
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 2685821657736338717ULL;
  }

  // uniform in [0, 1), 53-bit resolution
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - next_unit();  // (0, 1], keeps the log finite
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  bool has_cached_;
  double cached_;
};

// SplitMix64 finalizer, used to derive independent substream seeds from a
// master seed (per tomography entry, per scan instance). Substreams make
// parallel simulation order-independent: entry k always sees the same draws.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace mqpt

#endif
