#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rsl {

// Monte Carlo scalar estimate with its standard error.
struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

// Streaming mean/variance (Welford).
class RunningMoments {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  void merge(const RunningMoments& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) { *this = o; return; }
    const double d = o.mean_ - mean_;
    const double nt = static_cast<double>(n_ + o.n_);
    m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / nt;
    mean_ += d * static_cast<double>(o.n_) / nt;
    n_ += o.n_;
  }
  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stdError() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline double binomialStdError(double p_hat, std::uint64_t n) {
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

// Least-squares line fit in log-log coordinates.
struct SlopeFit {
  std::vector<double> xs;  // the raw abscissae (not logged)
  std::vector<double> ys;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline SlopeFit fitLogLog(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fitLogLog: need >= 2 matching points");
  SlopeFit fit;
  fit.xs = xs;
  fit.ys = ys;
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw std::invalid_argument("fitLogLog: nonpositive point");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

// Kolmogorov-Smirnov statistic of a sample against a cdf.
inline double ksStatistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ksStatistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = cdf(sample[i]);
    d = std::max(d, std::max(F - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - F));
  }
  return d;
}

namespace detail {

// Regularized upper incomplete gamma Q(s, x), series + continued fraction.
inline double gammaQ(double s, double x) {
  if (x < 0.0 || s <= 0.0) throw std::invalid_argument("gammaQ: bad arguments");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(s);
  if (x < s + 1.0) {
    // P by series, Q = 1 - P
    double ap = s, sum = 1.0 / s, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return 1.0 - sum * std::exp(-x + s * std::log(x) - lg);
  }
  // Q by Lentz continued fraction
  double b = x + 1.0 - s, c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + s * std::log(x) - lg) * h;
}

}  // namespace detail

// Upper-tail p-value of a chi-square statistic.
inline double chiSquarePValue(double stat, int dof) {
  if (dof <= 0) throw std::invalid_argument("chiSquarePValue: dof must be positive");
  if (stat <= 0.0) return 1.0;
  return detail::gammaQ(0.5 * dof, 0.5 * stat);
}

}  // namespace rsl
