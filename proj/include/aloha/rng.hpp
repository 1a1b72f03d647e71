#pragma once
// Seedable random streams. The engine (mt19937_64) has a standard-specified
// sequence, and every sampler below is implemented here rather than taken from
// std::*_distribution (whose sequences are implementation-defined), so a seed
// reproduces the same results on any toolchain. Substreams are derived with
// SplitMix64 so replication k is independent of replication j and of the
// parallel schedule.

#include <cmath>
#include <cstdint>
#include <random>

namespace aloha {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(splitmix64_mix(seed + 0x9E3779B97F4A7C15ULL)) {}

  // Independent stream for (seed, index); used one-per-replication.
  static RngStream substream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed + 0x9E3779B97F4A7C15ULL * (index + 2);
    return RngStream(splitmix64_mix(s));
  }

  // Uniform on [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  // Standard normal, Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  // Gamma(shape, scale 1), Marsaglia-Tsang squeeze method.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Poisson. Exact for all means: product-of-uniforms inversion below 10,
  // Hormann's PTRD transformed rejection above (O(1) per draw, which matters
  // for the ~1e5 node counts drawn per replication).
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 10.0) {
      const double limit = std::exp(-mean);
      std::uint64_t k = 0;
      double prod = uniform();
      while (prod > limit) {
        prod *= uniform();
        ++k;
      }
      return k;
    }
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      double u;
      double v = uniform();
      if (v <= 0.86 * v_r) {
        u = v / v_r - 0.43;
        return static_cast<std::uint64_t>(
            std::floor((2.0 * a / (0.5 - std::fabs(u)) + b) * u + mean + 0.445));
      }
      if (v >= v_r) {
        u = uniform() - 0.5;
      } else {
        u = v / v_r - 0.93;
        u = ((u < 0.0) ? -0.5 : 0.5) - u;
        v = uniform() * v_r;
      }
      const double us = 0.5 - std::fabs(u);
      if (us < 0.013 && v > us) continue;
      const double k = std::floor((2.0 * a / us + b) * u + mean + 0.445);
      v = v * inv_alpha / (a / (us * us) + b);
      constexpr double log_sqrt_2pi = 0.91893853320467267;
      if (k >= 10.0) {
        if (std::log(v * smu) <= (k + 0.5) * std::log(mean / k) - mean - log_sqrt_2pi + k -
                                     (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k)
          return static_cast<std::uint64_t>(k);
      } else if (k >= 0.0) {
        if (std::log(v) <= k * std::log(mean) - mean - std::lgamma(k + 1.0))
          return static_cast<std::uint64_t>(k);
      }
    }
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace aloha
