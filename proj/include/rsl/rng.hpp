#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace rsl {

// SplitMix64 step; used for seed expansion and substream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with explicit seeding. Substreams are derived from the
// (seed, index) pair, never from generator state, so a fixed chunking of
// work onto substreams gives bitwise-reproducible runs at any thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t seed() const { return seed_; }

  Rng substream(std::uint64_t index) const {
    std::uint64_t sm = seed_ ^ (0xA0761D6478BD642FULL * (index + 1));
    splitmix64(sm);
    return Rng(splitmix64(sm));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0,1); never returns 0 or 1.
  double u01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // Marsaglia polar method, no cached spare.
  double normal() {
    double v1, v2, s;
    do {
      v1 = 2.0 * u01() - 1.0;
      v2 = 2.0 * u01() - 1.0;
      s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    return v1 * std::sqrt(-2.0 * std::log(s) / s);
  }

  double exponential() { return -std::log(u01()); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
};

// Poisson count. Inversion by sequential search for small means,
// Hormann's PTRS transformed rejection for large ones.
inline long samplePoissonCount(double mean, Rng& rng) {
  if (mean <= 0.0) return 0;
  if (mean <= 30.0) {
    const double L = std::exp(-mean);
    long k = 0;
    double p = rng.u01();
    while (p > L) {
      ++k;
      p *= rng.u01();
    }
    return k;
  }
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double ln_mean = std::log(mean);
  for (;;) {
    double U = rng.u01() - 0.5;
    double V = rng.u01();
    double us = 0.5 - std::fabs(U);
    long k = static_cast<long>(std::floor((2.0 * a / us + b) * U + mean + 0.43));
    if (us >= 0.07 && V <= v_r) return k;
    if (k < 0 || (us < 0.013 && V > us)) continue;
    if (std::log(V) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        static_cast<double>(k) * ln_mean - mean - std::lgamma(static_cast<double>(k) + 1.0)) {
      return k;
    }
  }
}

}  // namespace rsl
