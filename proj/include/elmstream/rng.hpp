#pragma once

#include <cmath>
#include <cstdint>

namespace elmstream {

// SplitMix64: counter-based 64-bit generator. Each draw advances the counter
// by a fixed odd constant and hashes it, so sequences depend only on the seed
// and are identical across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : counter_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (counter_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) built from the top 53 bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi], both ends inclusive.
  long uniform_int(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
    return lo + static_cast<long>(next() % span);
  }

  /// Standard normal deviate (Box-Muller, second value cached).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925287;
    cached_ = radius * std::sin(two_pi * u2);
    have_cached_ = true;
    return radius * std::cos(two_pi * u2);
  }

 private:
  std::uint64_t counter_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace elmstream
