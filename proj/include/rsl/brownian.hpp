#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rsl/closed_set.hpp"
#include "rsl/rng.hpp"
#include "rsl/special.hpp"

namespace rsl {

// Sufficient statistic of the Brownian zero set on [0, t]: emptiness flag,
// first zero (anchor) and last zero. All tilted densities downstream depend
// on the zero set only through (alpha, g_last).
struct BrownianZeroSummary {
  double horizon = 1.0;
  bool empty = true;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double g_last = std::numeric_limits<double>::quiet_NaN();

  double diam() const { return empty ? 0.0 : g_last - alpha; }
};

// Seed configuration: Brownian start point a and vacuum rate beta.
struct SeedParams {
  double a = 0.1;
  double beta = 1.0;

  void validate() const {
    if (!(a > 0.0) || !(beta > 0.0))
      throw std::invalid_argument("SeedParams: need a > 0 and beta > 0");
  }
};

// First hitting time of 0 from a: distributed as a^2 / N^2, N standard
// normal (inverse chi-square form of the stable-1/2 density f_a).
inline double sampleHittingTime(double a, Rng& rng) {
  if (!(a > 0.0)) throw std::invalid_argument("sampleHittingTime: a must be > 0");
  double n;
  do {
    n = rng.normal();
  } while (n == 0.0);
  return a * a / (n * n);
}

// Last zero of standard Brownian motion on [0, T]: T sin^2(pi U / 2).
inline double sampleArcsineLastZero(double T, Rng& rng) {
  if (!(T > 0.0)) throw std::invalid_argument("sampleArcsineLastZero: T must be > 0");
  const double s = std::sin(0.5 * kPi * rng.u01());
  return T * s * s;
}

// Brownian meander endpoint at time A: Rayleigh with scale sqrt(A).
inline double sampleMeanderEndpoint(double A, Rng& rng) {
  if (!(A > 0.0)) throw std::invalid_argument("sampleMeanderEndpoint: A must be > 0");
  return std::sqrt(-2.0 * A * std::log(rng.u01()));
}

// Zero-set summary under the raw Brownian law started at a: empty iff
// T_0 > t, else alpha = T_0 and g_last = T_0 + (arcsine last zero on the
// remaining horizon).
inline BrownianZeroSummary sampleZeroSummary(double a, double t, Rng& rng) {
  if (!(t > 0.0)) throw std::invalid_argument("sampleZeroSummary: t must be > 0");
  BrownianZeroSummary out;
  out.horizon = t;
  const double t0 = sampleHittingTime(a, rng);
  if (t0 > t) return out;
  out.empty = false;
  out.alpha = t0;
  out.g_last = t0 + (t0 < t ? sampleArcsineLastZero(t - t0, rng) : 0.0);
  return out;
}

// Lossless injection into the interval carrier: {[alpha,alpha],[G,G]}.
inline ClosedSet toClosedSet(const BrownianZeroSummary& s) {
  if (s.empty) return ClosedSet(s.horizon);
  if (s.g_last == s.alpha) return ClosedSet(s.horizon, {{s.alpha, s.alpha}});
  return ClosedSet(s.horizon, {{s.alpha, s.alpha}, {s.g_last, s.g_last}});
}

}  // namespace rsl
