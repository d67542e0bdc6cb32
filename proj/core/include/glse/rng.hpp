#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace glse {

/// Counter-mode pseudo-random stream built on the splitmix64 output hash.
/// Every draw is a pure function of (seed, counter), so streams are
/// platform-stable and child streams derived from distinct keys are
/// independent for all practical purposes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return hash(seed_ + (++counter_) * kGamma); }

  /// Uniform in (0, 1]; never returns 0 so it is safe under log().
  double uniform01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (explicit formulas, no libstdc++
  /// distribution objects, so the stream is reproducible everywhere).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * kPi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_gaussian(double variance) {
    const double sigma = std::sqrt(0.5 * variance);
    const double re = gaussian();
    const double im = gaussian();
    return {sigma * re, sigma * im};
  }

  /// Stateless seed derivation; used to build per-realization child seeds
  /// from (master, sweep index, realization index) style tuples.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t key) {
    return hash(seed ^ hash(key + kGamma));
  }

  static std::uint64_t hash(std::uint64_t z) {
    z += kGamma;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace glse
