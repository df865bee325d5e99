#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rsl/parallel.hpp"
#include "rsl/quadrature.hpp"
#include "rsl/rng.hpp"
#include "rsl/stats.hpp"

namespace rsl {

// Total variation (1/2) int |d1 - d2| over [lo, hi]. Endpoint singularity
// flags of either density trigger the substitution.
inline double tvDensities(const Density1D& d1, const Density1D& d2, double lo, double hi) {
  Density1D diff;
  diff.lo = lo;
  diff.hi = hi;
  diff.singular_lo = (d1.singular_lo && lo == d1.lo) || (d2.singular_lo && lo == d2.lo);
  diff.singular_hi = (d1.singular_hi && hi == d1.hi) || (d2.singular_hi && hi == d2.hi);
  diff.eval = [&d1, &d2](double x) { return std::fabs(d1(x) - d2(x)); };
  return 0.5 * quadSingular(diff, lo, hi);
}

// Hellinger affinity int sqrt(d1 d2) over the intersection of supports;
// 0 when the supports are disjoint.
inline double hellingerDensities(const Density1D& d1, const Density1D& d2) {
  const double lo = std::max(d1.lo, d2.lo);
  const double hi = std::min(d1.hi, d2.hi);
  if (!(lo < hi)) return 0.0;
  Density1D prod;
  prod.lo = lo;
  prod.hi = hi;
  prod.singular_lo = (d1.singular_lo && lo == d1.lo) || (d2.singular_lo && lo == d2.lo);
  prod.singular_hi = (d1.singular_hi && hi == d1.hi) || (d2.singular_hi && hi == d2.hi);
  prod.eval = [&d1, &d2](double x) { return std::sqrt(d1(x) * d2(x)); };
  return quadSingular(prod, lo, hi);
}

// Squared Hellinger distance between weighted laws p mu and q nu:
// (sqrt p - sqrt q)^2 + 2 sqrt(pq) (1 - H(mu, nu)).
inline double hellingerWeighted(double p, double q, double cond_affinity) {
  if (p < 0.0 || q < 0.0) throw std::invalid_argument("hellingerWeighted: weights must be >= 0");
  const double sp = std::sqrt(p), sq = std::sqrt(q);
  return (sp - sq) * (sp - sq) + 2.0 * sp * sq * (1.0 - cond_affinity);
}

// Binomial proportion of event(sampler(rng)) over n draws.
template <class Sampler, class Predicate>
MCEstimate mcEventProb(Sampler&& sampler, Predicate&& event, std::uint64_t n, Rng& rng) {
  if (n < 100) throw std::invalid_argument("mcEventProb: need n >= 100");
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i)
    if (event(sampler(rng))) ++hits;
  MCEstimate e;
  e.value = static_cast<double>(hits) / static_cast<double>(n);
  e.std_error = binomialStdError(e.value, n);
  e.n = n;
  e.seed = rng.seed();
  return e;
}

// Same estimator split over fixed substream chunks; exact hit counts are
// summed in chunk order, so the result is independent of the thread count.
template <class SamplerFactory, class Predicate>
MCEstimate mcEventProbParallel(SamplerFactory&& make_sampler, Predicate&& event,
                               std::uint64_t n, const Rng& base, unsigned jobs) {
  std::vector<std::uint64_t> hits(kFixedChunks, 0);
  forEachChunk(n, kFixedChunks, jobs, [&](unsigned c, std::uint64_t b, std::uint64_t e) {
    Rng rng = base.substream(c);
    auto sampler = make_sampler();
    std::uint64_t h = 0;
    for (std::uint64_t i = b; i < e; ++i)
      if (event(sampler(rng))) ++h;
    hits[c] = h;
  });
  std::uint64_t total = 0;
  for (std::uint64_t h : hits) total += h;
  MCEstimate est;
  est.value = static_cast<double>(total) / static_cast<double>(n);
  est.std_error = binomialStdError(est.value, n);
  est.n = n;
  est.seed = base.seed();
  return est;
}

// Per-block weights under the seed law nu_u and the concatenation reference
// sigma, with the conditional comparison term entering the Hellinger chain.
struct BlockTerm {
  double p = 0.0;         // nu_u mass
  double q = 0.0;         // sigma mass
  double p_std_error = 0.0;
  double cond_term = 0.0;  // 1 - H upper bound used for this block
};

struct BlockDecomposition {
  BlockTerm e00, e10, e01, e11;
};

}  // namespace rsl
