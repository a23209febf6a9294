#pragma once

#include <cmath>
#include <cstdint>

namespace confinv {

// Counter-based splitmix64 stream. Every report that consumed randomness
// records {"rng": "splitmix64", "seed": ...} so runs can be reproduced.
class SplitMix64 {
public:
  static constexpr const char* name = "splitmix64";

  explicit SplitMix64(std::uint64_t seed = 42) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [a, b)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // standard normal, Box-Muller; the spare keeps the stream deterministic
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double twopi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(twopi * u2);
    has_spare_ = true;
    return r * std::cos(twopi * u2);
  }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace confinv
