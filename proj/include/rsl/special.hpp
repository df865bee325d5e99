#pragma once

#include <cmath>
#include <stdexcept>

namespace rsl {

inline constexpr double kPi = 3.14159265358979323846;

// Standard normal cdf via erfc; absolute error below 1e-15.
inline double normalCdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace detail {

// Even power series sum_k (x/2)^{2k} / (k!)^2, valid for all x but used
// for x <= 15 where it needs at most ~40 terms.
inline double besselI0Series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// Asymptotic expansion of e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k a_k,
// a_k = a_{k-1} (2k-1)^2 / (8 k x). Summed to the smallest term; at the
// x = 15 crossover the truncation error is below 1e-13 relative.
inline double besselI0ScaledAsymptotic(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) /
                        (8.0 * static_cast<double>(k) * x);
    if (next >= term) break;  // divergent tail reached
    term = next;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

}  // namespace detail

// e^{-x} I0(x); safe for arbitrarily large x.
inline double besselI0Scaled(double x) {
  if (x < 0.0) throw std::domain_error("besselI0Scaled: negative argument");
  if (x <= 15.0) return detail::besselI0Series(x) * std::exp(-x);
  return detail::besselI0ScaledAsymptotic(x);
}

// Modified Bessel function of the first kind, order zero.
inline double besselI0(double x) {
  if (x < 0.0) throw std::domain_error("besselI0: negative argument");
  if (x <= 15.0) return detail::besselI0Series(x);
  return detail::besselI0ScaledAsymptotic(x) * std::exp(x);
}

// First-hitting-time density of level 0 for Brownian motion started at a:
// f_a(x) = a (2 pi)^{-1/2} x^{-3/2} exp(-a^2 / (2x)).
inline double hittingDensity(double a, double x) {
  if (a <= 0.0 || x <= 0.0) throw std::domain_error("hittingDensity: needs a>0, x>0");
  return a / std::sqrt(2.0 * kPi) * std::pow(x, -1.5) * std::exp(-a * a / (2.0 * x));
}

// P(T_0 > t) for Brownian motion started at a>0: 2 Phi(a/sqrt(t)) - 1.
inline double hittingSurvival(double a, double t) {
  if (a <= 0.0 || t <= 0.0) throw std::domain_error("hittingSurvival: needs a>0, t>0");
  return std::erf(a / std::sqrt(2.0 * t));
}

// Laplace transform of the arcsine last-zero law on [0,T]:
// E[e^{-c g_T}] = e^{-cT/2} I0(cT/2).
inline double arcsinePhi(double c, double T) {
  if (c < 0.0 || T <= 0.0) throw std::domain_error("arcsinePhi: needs c>=0, T>0");
  return besselI0Scaled(0.5 * c * T);
}

// Arcsine cdf on (0,T): (2/pi) asin(sqrt(x/T)).
inline double arcsineCdf(double x, double T) {
  if (x <= 0.0) return 0.0;
  if (x >= T) return 1.0;
  return 2.0 / kPi * std::asin(std::sqrt(x / T));
}

// cdf of Gamma(1/2, rate c): P(G <= x) = erf(sqrt(c x)).
inline double gammaHalfCdf(double c, double x) {
  if (x <= 0.0) return 0.0;
  return std::erf(std::sqrt(c * x));
}

}  // namespace rsl
