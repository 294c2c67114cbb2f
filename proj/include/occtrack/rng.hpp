#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace occtrack {

/// Seeded generator with hand-rolled draws on top of std::mt19937_64.
/// The engine's output sequence is pinned by the standard; the standard
/// library distributions are not, so uniform/gaussian are derived here to
/// keep seeded fixtures stable across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound). bound must be positive.
  int uniform_int(int bound) {
    return static_cast<int>(engine_() % static_cast<std::uint64_t>(bound));
  }

  /// Box-Muller; draws a pair and caches the second value.
  double gaussian(double mean, double stddev) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mean + stddev * r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_{0.0};
  bool has_spare_{false};
};

}  // namespace occtrack
