#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "rsl/brownian.hpp"
#include "rsl/quadrature.hpp"
#include "rsl/rng.hpp"
#include "rsl/special.hpp"

namespace rsl {

// Localization rate c(x) = |ln x| / x^2 for x in (0,1].
inline double localizationRate(double x) {
  if (!(x > 0.0) || x > 1.0) throw std::domain_error("localizationRate: x must be in (0,1]");
  return -std::log(x) / (x * x);
}

// Anchor-adapted localized tilt weight exp(-c(alpha) * dm) for nonempty
// configurations; horizons at or above 1 are rejected rather than passed
// through untilted.
inline double localizationWeight(double t, double alpha, double dm) {
  if (!(t > 0.0) || t >= 1.0) throw std::domain_error("localizationWeight: t must be in (0,1)");
  if (!(alpha > 0.0) || alpha > t || dm < 0.0)
    throw std::domain_error("localizationWeight: need 0 < alpha <= t and dm >= 0");
  return std::exp(-localizationRate(alpha) * dm);
}

inline double localizationWeight(double t, const BrownianZeroSummary& z) {
  return z.empty ? 1.0 : localizationWeight(t, z.alpha, z.diam());
}

// Exponentially tilted arcsine law mu_{T,c} on (0,T) with density
// e^{-cg} / (Z_T(c) pi sqrt(g (T-g))). The normalizer carried here comes
// from singular quadrature; it must agree with the closed form
// arcsinePhi(c,T) = e^{-cT/2} I0(cT/2) to 1e-8.
struct TiltedArcsine {
  double T = 1.0;
  double c = 0.0;
  double Z = 1.0;

  double pdf(double g) const {
    if (g <= 0.0 || g >= T) return 0.0;
    return std::exp(-c * g) / (Z * kPi * std::sqrt(g * (T - g)));
  }

  Density1D density() const {
    const double TT = T, cc = c, ZZ = Z;
    return Density1D{0.0, T,
                     [TT, cc, ZZ](double g) {
                       return std::exp(-cc * g) / (ZZ * kPi * std::sqrt(g * (TT - g)));
                     },
                     true, true, false};
  }
};

namespace detail {

// Quadrature of the unnormalized tilted-arcsine mass over (lo, hi) within
// (0,T), in the angle parameterization g = T sin^2(theta/2) which removes
// both endpoint singularities and stays stable for very large c T.
inline double tiltedArcsineMass(double T, double c, double lo, double hi) {
  const double th_lo = lo <= 0.0 ? 0.0 : 2.0 * std::asin(std::sqrt(lo / T));
  const double th_hi = hi >= T ? kPi : 2.0 * std::asin(std::sqrt(hi / T));
  if (th_lo >= th_hi) return 0.0;
  const double kappa = 0.5 * c * T;
  // integrand exp(-c g)/pi with g = T sin^2(th/2); the half-angle form stays
  // accurate where 1 - cos(th) would cancel to zero
  auto f = [kappa](double th) {
    const double sn = std::sin(0.5 * th);
    return std::exp(-2.0 * kappa * sn * sn) / kPi;
  };
  // concentrate sampling near th_lo where the integrand peaks for large
  // kappa; the remainder beyond 12 peak widths carries less than e^-72 of
  // the mass, which the coarse pass may treat as zero
  if (kappa > 50.0) {
    const double cut = th_lo + 12.0 / std::sqrt(kappa);
    if (cut < th_hi)
      return integrateAdaptive(f, th_lo, cut, 1e-14, kQuadRelTol) +
             integrateAdaptive(f, cut, th_hi, 1e-14, kQuadRelTol);
  }
  return integrateAdaptive(f, th_lo, th_hi, 1e-14, kQuadRelTol);
}

}  // namespace detail

// Build mu_{T,c} with the quadrature normalizer.
inline TiltedArcsine tiltedArcsine(double T, double c) {
  if (!(T > 0.0) || c < 0.0) throw std::domain_error("tiltedArcsine: need T > 0, c >= 0");
  TiltedArcsine d;
  d.T = T;
  d.c = c;
  d.Z = c == 0.0 ? 1.0 : detail::tiltedArcsineMass(T, c, 0.0, T);
  return d;
}

// mu_{T,c}((0, x]) by quadrature.
inline double tiltedArcsineCdf(const TiltedArcsine& d, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= d.T) return 1.0;
  return detail::tiltedArcsineMass(d.T, d.c, 0.0, x) / d.Z;
}

// von Mises(0, kappa) draw on (-pi, pi] by the Best-Fisher wrapped-Cauchy
// rejection; uniform for kappa = 0, Gaussian small-angle regime for very
// large kappa where the envelope parameters degenerate in doubles.
inline double sampleVonMisesCentered(double kappa, Rng& rng) {
  if (kappa < 1e-8) return kPi * (2.0 * rng.u01() - 1.0);
  if (kappa > 1e6) {
    double th;
    do {
      th = rng.normal() / std::sqrt(kappa);
    } while (std::fabs(th) > kPi);
    return th;
  }
  const double s = 0.5 / kappa;
  const double r = s + std::sqrt(1.0 + s * s);
  for (;;) {
    const double z = std::cos(kPi * rng.u01());
    const double w = (1.0 + r * z) / (r + z);
    const double y = kappa * (r - w);
    const double v = rng.u01();
    if (y * (2.0 - y) - v >= 0.0 || std::log(y / v) + 1.0 - y >= 0.0) {
      const double th = std::acos(w);
      return rng.u01() < 0.5 ? -th : th;
    }
  }
}

namespace detail {

// Exact draw from mu_{T,c}. Moderate tilts use rejection from arcsine
// proposals with acceptance e^{-cg} (expected proposals 1/Z_T(c)); once that
// acceptance rate drops below 1%, switch to the angle map g = T sin^2(th/2),
// under which the tilted arcsine is the von Mises density
// exp(-kappa cos th) on (0, pi) -- a folded von Mises, bounded cost in c T.
inline double drawTiltedArcsine(double T, double c, Rng& rng) {
  if (c == 0.0) return sampleArcsineLastZero(T, rng);
  if (arcsinePhi(c, T) >= 0.01) {
    for (;;) {
      const double g = sampleArcsineLastZero(T, rng);
      if (rng.u01() <= std::exp(-c * g)) return g;
    }
  }
  const double th = sampleVonMisesCentered(0.5 * c * T, rng);
  const double sn = std::sin(0.5 * th);
  return T * sn * sn;
}

}  // namespace detail

// Draw from mu_{T,c}; rejects tilts so deep that the law degenerates below
// double resolution.
inline double sampleTiltedArcsine(double T, double c, Rng& rng) {
  if (!(T > 0.0) || c < 0.0) throw std::domain_error("sampleTiltedArcsine: need T > 0, c >= 0");
  if (c > 0.0 && arcsinePhi(c, T) < 1e-12)
    throw std::domain_error("sampleTiltedArcsine: degenerate tilt");
  return detail::drawTiltedArcsine(T, c, rng);
}

// Anchor law of the localized tilt and its Palm-uniformization density.
// kappaLoc is the anchor measure density f_a(x) Phi_{c(x)}(t-x) / Zloc on
// (0,t]; h(x) = Zloc / (f_a(x) Phi_{c(x)}(t-x)) satisfies
// int h dkappa = t and Ct = pLoc + t.
struct PalmDensity {
  double t = 0.0;
  SeedParams params;
  double Zloc = 0.0;   // survival + int f_a Phi
  double pLoc = 0.0;   // localized vacuum mass
  double Ct = 0.0;     // Palm normalizer

  double anchorWeight(double x) const {
    return hittingDensity(params.a, x) * arcsinePhi(localizationRate(x), t - x);
  }
  double kappaLocDensity(double x) const { return anchorWeight(x) / Zloc; }
  double h(double x) const { return Zloc / anchorWeight(x); }
};

inline PalmDensity palmDensityH(const SeedParams& p, double t) {
  p.validate();
  if (!(t > 0.0) || t >= 1.0) throw std::domain_error("palmDensityH: t must be in (0,1)");
  PalmDensity out;
  out.t = t;
  out.params = p;
  const double a = p.a;
  auto w = [&](double x) {
    return x >= t ? hittingDensity(a, x)  // Phi term is 1 at x = t (width 0)
                  : hittingDensity(a, x) * arcsinePhi(localizationRate(x), t - x);
  };
  const double mass = integrateAdaptive(w, 0.0, t, 1e-12, 1e-10);
  const double survival = hittingSurvival(a, t);
  out.Zloc = survival + mass;
  out.pLoc = survival / out.Zloc;
  out.Ct = out.pLoc + t;
  return out;
}

// Radon-Nikodym derivative f_t = d nu_t / d mu_t of the normalized seed with
// respect to the raw Brownian summary law:
//   empty:    e^{-beta t} / P_a(T_0 > t)
//   nonempty: ((1 - e^{-beta t}) / t) e^{-c(alpha) dm}
//             / (f_a(alpha) Phi_{c(alpha)}(t - alpha)).
inline double seedDensity(const SeedParams& p, double t, const BrownianZeroSummary& z) {
  p.validate();
  if (!(t > 0.0) || t > 1.0) throw std::domain_error("seedDensity: t must be in (0,1]");
  if (z.horizon != t) throw std::invalid_argument("seedDensity: summary horizon mismatch");
  if (z.empty) return std::exp(-p.beta * t) / hittingSurvival(p.a, t);
  if (!(z.alpha > 0.0) || z.alpha > t)
    throw std::domain_error("seedDensity: alpha outside (0, t]");
  const double c = localizationRate(z.alpha);
  const double phi = z.alpha < t ? arcsinePhi(c, t - z.alpha) : 1.0;
  return (1.0 - std::exp(-p.beta * t)) / t * std::exp(-c * z.diam()) /
         (hittingDensity(p.a, z.alpha) * phi);
}

// Draw from the normalized seed nu_t: empty with probability e^{-beta t},
// otherwise anchor uniform on (0,t) and spread from the tilted arcsine at
// rate c(alpha). The law does not depend on the Brownian start point.
inline BrownianZeroSummary sampleSeed(double beta, double t, Rng& rng) {
  if (!(beta > 0.0)) throw std::invalid_argument("sampleSeed: beta must be > 0");
  if (!(t > 0.0) || t > 1.0) throw std::domain_error("sampleSeed: t must be in (0,1]");
  BrownianZeroSummary out;
  out.horizon = t;
  if (rng.u01() < std::exp(-beta * t)) return out;
  out.empty = false;
  out.alpha = t * rng.u01();
  const double dm = out.alpha < t
                        ? detail::drawTiltedArcsine(t - out.alpha, localizationRate(out.alpha), rng)
                        : 0.0;
  out.g_last = out.alpha + dm;
  return out;
}

inline BrownianZeroSummary sampleSeed(const SeedParams& p, double t, Rng& rng) {
  p.validate();
  return sampleSeed(p.beta, t, rng);
}

// Vacuum unit overlap m(t) = e^{-beta t / 2}.
inline double vacuumOverlap(double beta, double t) {
  if (!(beta > 0.0) || !(t > 0.0)) throw std::invalid_argument("vacuumOverlap: need beta, t > 0");
  return std::exp(-0.5 * beta * t);
}

}  // namespace rsl
