#pragma once

#include <cmath>
#include <cstdint>

namespace qecdyn {

/// Counter-based generator: the k-th draw is splitmix64(seed + k * golden).
/// Only integer arithmetic and the explicit transforms below are used, so a
/// given seed yields the same parameter samples on every platform (up to libm
/// rounding of log/cos/sqrt). std:: distributions are avoided for that reason.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Inverse CDF: -mean * ln(u).
  double exponential(double mean) { return -mean * std::log(uniform01()); }

  /// Box-Muller, consuming two uniforms per call.
  double normal(double mean, double stddev) {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace qecdyn
