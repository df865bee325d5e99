#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rsl/closed_set.hpp"
#include "rsl/rng.hpp"

namespace rsl {

// Marked Poisson model on (0,t) x L with intensity lambda * Leb (x) eta,
// where eta is a finite atomic mark distribution given by `marks`.
struct PoissonModel {
  double lambda = 1.0;
  std::vector<double> marks;  // eta(l) per mark id, summing to 1

  void validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("PoissonModel: lambda must be > 0");
    if (marks.empty()) throw std::invalid_argument("PoissonModel: need at least one mark");
    double sum = 0.0;
    for (double w : marks) {
      if (w < 0.0) throw std::invalid_argument("PoissonModel: negative mark weight");
      sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("PoissonModel: mark weights must sum to 1");
  }
};

// Nonnegative function on the mark space, indexed like PoissonModel::marks.
struct MarkFunction {
  std::vector<double> values;

  void validate(const PoissonModel& m) const {
    if (values.size() != m.marks.size())
      throw std::invalid_argument("MarkFunction: size mismatch with model marks");
    for (double v : values)
      if (v < 0.0) throw std::invalid_argument("MarkFunction: values must be >= 0");
  }
};

inline MarkFunction constantMarkFunction(const PoissonModel& m, double v) {
  return MarkFunction{std::vector<double>(m.marks.size(), v)};
}

// <a,b> in L^2(eta).
inline double markInner(const PoissonModel& m, const MarkFunction& a, const MarkFunction& b) {
  double s = 0.0;
  for (std::size_t l = 0; l < m.marks.size(); ++l) s += m.marks[l] * a.values[l] * b.values[l];
  return s;
}

inline double markNormSq(const PoissonModel& m, const MarkFunction& a) {
  return markInner(m, a, a);
}

namespace detail {

inline int sampleMark(const std::vector<double>& weights, double total, Rng& rng) {
  double u = total * rng.u01();
  for (std::size_t l = 0; l + 1 < weights.size(); ++l) {
    if (u < weights[l]) return static_cast<int>(l);
    u -= weights[l];
  }
  return static_cast<int>(weights.size()) - 1;
}

inline MarkedPointSet samplePoissonWith(double rate, const std::vector<double>& mark_weights,
                                        double weight_total, double t, Rng& rng) {
  const long n = samplePoissonCount(rate * t, rng);
  std::vector<double> times(static_cast<std::size_t>(n));
  for (auto& x : times) x = t * rng.u01();
  std::sort(times.begin(), times.end());
  MarkedPointSet z;
  z.horizon = t;
  z.atoms.reserve(times.size());
  for (double x : times) z.atoms.push_back({x, sampleMark(mark_weights, weight_total, rng)});
  return z;
}

}  // namespace detail

// Sample of the reference Poisson law at horizon t: count ~ Poisson(lambda t),
// times iid Unif(0,t) sorted, marks iid eta.
inline MarkedPointSet samplePoisson(const PoissonModel& m, double t, Rng& rng) {
  if (!(t > 0.0)) throw std::invalid_argument("samplePoisson: t must be > 0");
  return detail::samplePoissonWith(m.lambda, m.marks, 1.0, t, rng);
}

// Sample of the tilted unit family nu^(a): intensity lambda * a^2 eta, i.e.
// rate lambda ||a||^2 with mark weights proportional to eta(l) a(l)^2.
inline MarkedPointSet sampleTiltedPoisson(const PoissonModel& m, const MarkFunction& a,
                                          double t, Rng& rng) {
  if (!(t > 0.0)) throw std::invalid_argument("sampleTiltedPoisson: t must be > 0");
  std::vector<double> w(m.marks.size());
  double total = 0.0;
  for (std::size_t l = 0; l < w.size(); ++l) {
    w[l] = m.marks[l] * a.values[l] * a.values[l];
    total += w[l];
  }
  if (!(total > 0.0)) throw std::invalid_argument("sampleTiltedPoisson: a vanishes eta-a.e.");
  return detail::samplePoissonWith(m.lambda * total, w, total, t, rng);
}

// Void probability exp(-lambda t Leb(I) eta(G)) for an interval of length
// `interval_len` (on the scaled horizon) and a mark subset of eta-mass
// `mark_subset_weight`.
inline double voidProbability(const PoissonModel& m, double t, double interval_len,
                              double mark_subset_weight) {
  if (!(t > 0.0) || interval_len < 0.0 || interval_len > t || mark_subset_weight < 0.0 ||
      mark_subset_weight > 1.0)
    throw std::invalid_argument("voidProbability: arguments out of range");
  return std::exp(-m.lambda * t * interval_len * mark_subset_weight);
}

// Radon-Nikodym density d nu_t^(a) / d mu_t evaluated at a sample:
// exp(lambda t (1 - ||a||^2)) prod_{(r,l) in z} a(l)^2.
inline double unitDensity(const PoissonModel& m, const MarkFunction& a, double t,
                          const MarkedPointSet& z) {
  double prod = std::exp(m.lambda * t * (1.0 - markNormSq(m, a)));
  for (const auto& atom : z.atoms) {
    const double v = a.values[static_cast<std::size_t>(atom.mark)];
    prod *= v * v;
  }
  return prod;
}

// <u^(a), u^(b)> = exp(-(lambda t / 2) ||a-b||^2).
inline double unitInnerProduct(const PoissonModel& m, const MarkFunction& a,
                               const MarkFunction& b, double t) {
  double nd = 0.0;
  for (std::size_t l = 0; l < m.marks.size(); ++l) {
    const double d = a.values[l] - b.values[l];
    nd += m.marks[l] * d * d;
  }
  return std::exp(-0.5 * m.lambda * t * nd);
}

// Covariance kernel lambda (<a,b> - ||a||^2/2 - ||b||^2/2); equals
// log(unitInnerProduct)/t for every t.
inline double covarianceKernel(const PoissonModel& m, const MarkFunction& a,
                               const MarkFunction& b) {
  return m.lambda *
         (markInner(m, a, b) - 0.5 * markNormSq(m, a) - 0.5 * markNormSq(m, b));
}

// Gram matrix G_ij = lambda <a_i - 1, a_j - 1> in L^2(eta); rank is at most
// the number of marks.
inline std::vector<std::vector<double>> indexGram(const PoissonModel& m,
                                                  const std::vector<MarkFunction>& fns) {
  if (fns.empty()) throw std::invalid_argument("indexGram: need at least one function");
  const std::size_t k = fns.size();
  std::vector<std::vector<double>> g(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < m.marks.size(); ++l)
        s += m.marks[l] * (fns[i].values[l] - 1.0) * (fns[j].values[l] - 1.0);
      g[i][j] = g[j][i] = m.lambda * s;
    }
  return g;
}

// Cox-Poisson mixture cocycle for the half/half randomization of the
// intensity between lambda and 2 lambda:
// Delta = (1/2 + 1/2 e^{-ls} 2^{n1})(1/2 + 1/2 e^{-lt} 2^{n2})
//         / (1/2 + 1/2 e^{-l(s+t)} 2^{n1+n2}).
inline double coxDelta(double lambda, double s, double t, long n1, long n2) {
  if (n1 < 0 || n2 < 0) throw std::invalid_argument("coxDelta: counts must be >= 0");
  auto factor = [lambda](double dur, long n) {
    return 0.5 + 0.5 * std::exp(-lambda * dur + static_cast<double>(n) * std::log(2.0));
  };
  return factor(s, n1) * factor(t, n2) / factor(s + t, n1 + n2);
}

// Sample of the Cox-Poisson mixture: intensity lambda or 2 lambda with
// probability 1/2 each.
inline MarkedPointSet sampleCoxPoisson(const PoissonModel& m, double t, Rng& rng) {
  PoissonModel mm = m;
  if (rng.u01() < 0.5) mm.lambda *= 2.0;
  return samplePoisson(mm, t, rng);
}

}  // namespace rsl
