#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>
#include <stdexcept>
#include <utility>

#include "rsl/special.hpp"

namespace rsl {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One-dimensional density descriptor. Endpoint flags mark inverse-square-root
// blowups that the integrator must remove by substitution. When log_scale is
// set, eval returns the log density.
struct Density1D {
  double lo = 0.0;
  double hi = 1.0;  // may be +infinity
  std::function<double(double)> eval;
  bool singular_lo = false;
  bool singular_hi = false;
  bool log_scale = false;

  double operator()(double x) const {
    return log_scale ? std::exp(eval(x)) : eval(x);
  }
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants). Odd-index nodes carry the Gauss weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Gk15Result {
  double integral;
  double error;
};

template <class F>
Gk15Result gk15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fv[15];
  const double fc = f(mid);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(mid - dx);
    const double f2 = f(mid + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  fv[7] = fc;

  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::fabs(fv[j] - mean) + std::fabs(fv[14 - j] - mean));
  resasc *= std::fabs(half);

  const double integral = resk * half;
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {integral, err};
}

// Globally adaptive scheme: keep a segment list, split the segment with the
// largest error estimate until the summed error meets the tolerance. Each
// segment may be bisected at most `max_depth` times.
template <class F>
double adaptiveGk(const F& f, double a, double b, double abs_tol, double rel_tol,
                  int max_depth) {
  struct Segment {
    double a, b, integral, error;
    int depth;
  };
  std::vector<Segment> segs;
  const auto first = gk15(f, a, b);
  segs.push_back({a, b, first.integral, first.error, 0});
  double total = first.integral, err = first.error;
  for (int iter = 0; iter < 4000; ++iter) {
    if (!std::isfinite(total)) throw QuadratureError("quadrature: non-finite integrand");
    if (err <= std::max(abs_tol, rel_tol * std::fabs(total))) return total;
    std::size_t worst = segs.size();
    double worst_err = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i)
      if (segs[i].depth < max_depth && segs[i].error > worst_err) {
        worst_err = segs[i].error;
        worst = i;
      }
    if (worst == segs.size()) break;  // nothing refinable left
    const Segment s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    const auto l = gk15(f, s.a, mid);
    const auto r = gk15(f, mid, s.b);
    total += l.integral + r.integral - s.integral;
    err += l.error + r.error - s.error;
    segs[worst] = {s.a, mid, l.integral, l.error, s.depth + 1};
    segs.push_back({mid, s.b, r.integral, r.error, s.depth + 1});
  }
  if (!std::isfinite(total)) throw QuadratureError("quadrature: non-finite integrand");
  const double tol = std::max(abs_tol, rel_tol * std::fabs(total));
  if (err > 1e3 * tol) throw QuadratureError("quadrature: bisection depth exhausted");
  return total;
}

}  // namespace detail

inline constexpr double kQuadAbsTol = 1e-10;
inline constexpr double kQuadRelTol = 1e-9;
inline constexpr int kQuadMaxDepth = 20;

template <class F>
double integrateAdaptive(const F& f, double a, double b,
                         double abs_tol = kQuadAbsTol, double rel_tol = kQuadRelTol) {
  if (!(a < b)) throw QuadratureError("integrateAdaptive: empty interval");
  return detail::adaptiveGk(f, a, b, abs_tol, rel_tol, kQuadMaxDepth);
}

namespace detail {

// Finite window with possible endpoint singularities removed by
// s = lo + (hi-lo) sin^2(pi v / 2); the Jacobian vanishes linearly at both
// ends and cancels an inverse-square-root blowup.
template <class F>
double quadFiniteSingular(const F& f, double lo, double hi, bool singular) {
  if (!singular) return integrateAdaptive(f, lo, hi);
  const double w = hi - lo;
  auto g = [&](double v) {
    const double sn = std::sin(0.5 * kPi * v);
    const double s = lo + w * sn * sn;
    return f(s) * w * 0.5 * kPi * std::sin(kPi * v);
  };
  return integrateAdaptive(g, 0.0, 1.0);
}

}  // namespace detail

// Integral of d over [lo, hi] subset of its support, with relative error
// around 1e-9. Infinite upper limits are mapped through x = m + u/(1-u).
inline double quadSingular(const Density1D& d, double lo, double hi) {
  if (lo < d.lo || (std::isfinite(d.hi) && hi > d.hi) || !(lo < hi))
    throw QuadratureError("quadSingular: window outside support");
  auto f = [&](double x) { return d(x); };

  if (std::isinf(hi)) {
    const double m = lo + 1.0;
    const double head = detail::quadFiniteSingular(f, lo, m, d.singular_lo);
    auto tail = [&](double u) {
      const double om = 1.0 - u;
      return f(m + u / om) / (om * om);
    };
    // the mapped tail keeps an inverse-square-root endpoint for densities
    // with x^{-3/2}-type decay, so run it through the same substitution
    return head + detail::quadFiniteSingular(tail, 0.0, 1.0, true);
  }

  const bool singular = (d.singular_lo && lo == d.lo) || (d.singular_hi && hi == d.hi);
  return detail::quadFiniteSingular(f, lo, hi, singular);
}

}  // namespace rsl
