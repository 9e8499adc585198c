#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spheresync {

/// SplitMix64 step; used to derive independent stream seeds from one
/// master seed so that adding a consumer never shifts the others.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// mt19937_64 with hand-rolled distributions, so streams do not depend on
/// the standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal via Box-Muller (no spare caching, fully stateless).
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = eng_();
    while (x >= limit) x = eng_();
    return x % n;
  }

  std::mt19937_64& engine() { return eng_; }

private:
  std::mt19937_64 eng_;
};

}  // namespace spheresync
