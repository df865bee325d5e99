#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rsl/distance.hpp"
#include "rsl/rng.hpp"
#include "rsl/tilt.hpp"
#include "rsl/verify.hpp"

using namespace rsl;

TEST_CASE("tvDensities: identical laws, tilt identity, gamma comparison") {
  const TiltedArcsine arc = tiltedArcsine(1.0, 0.0);
  const TiltedArcsine same = tiltedArcsine(1.0, 0.0);
  const Density1D d1 = arc.density(), d2 = same.density();
  CHECK(tvDensities(d1, d2, 0.0, 1.0) == Catch::Approx(0.0).margin(1e-9));

  // c=0 tilt reproduces the plain arcsine exactly
  Density1D plain;
  plain.lo = 0.0;
  plain.hi = 1.0;
  plain.singular_lo = plain.singular_hi = true;
  plain.eval = [](double g) { return 1.0 / (kPi * std::sqrt(g * (1.0 - g))); };
  CHECK(tvDensities(d1, plain, 0.0, 1.0) == Catch::Approx(0.0).margin(1e-9));

  // deep tilt against the Gamma(1/2) law stays under the 6/(cS) cap
  const TiltedArcsine t10 = tiltedArcsine(1.0, 10.0);
  const Density1D mu = t10.density();
  const Density1D wc = verify::gammaHalfDensity(10.0);
  const double tv_win = tvDensities(mu, wc, 0.0, 1.0);
  CHECK(tv_win <= 0.6);
  CHECK(tv_win == Catch::Approx(0.014176).margin(0.0002));
}

TEST_CASE("hellingerDensities: identical, disjoint, and the 1-H <= TV bound") {
  const TiltedArcsine a = tiltedArcsine(1.0, 3.0);
  CHECK(hellingerDensities(a.density(), a.density()) == Catch::Approx(1.0).margin(1e-9));

  Density1D left, right;
  left.lo = 0.0;
  left.hi = 1.0;
  left.eval = [](double) { return 1.0; };
  right.lo = 2.0;
  right.hi = 3.0;
  right.eval = [](double) { return 1.0; };
  CHECK(hellingerDensities(left, right) == 0.0);

  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const double c1 = 10.0 * rng.u01(), c2 = 10.0 * rng.u01();
    const double T = 0.5 + rng.u01();
    const TiltedArcsine p = tiltedArcsine(T, c1);
    const TiltedArcsine q = tiltedArcsine(T, c2);
    const double H = hellingerDensities(p.density(), q.density());
    const double tv = tvDensities(p.density(), q.density(), 0.0, T);
    CHECK(1.0 - H <= tv + 1e-9);
    CHECK(H <= 1.0 + 1e-9);
  }
}

TEST_CASE("tvDensities is symmetric and satisfies the triangle inequality") {
  const TiltedArcsine a = tiltedArcsine(1.0, 1.0);
  const TiltedArcsine b = tiltedArcsine(1.0, 6.0);
  const TiltedArcsine c = tiltedArcsine(1.0, 20.0);
  const double ab = tvDensities(a.density(), b.density(), 0.0, 1.0);
  const double ba = tvDensities(b.density(), a.density(), 0.0, 1.0);
  const double bc = tvDensities(b.density(), c.density(), 0.0, 1.0);
  const double ac = tvDensities(a.density(), c.density(), 0.0, 1.0);
  CHECK(ab == Catch::Approx(ba).margin(1e-8));
  CHECK(ac <= ab + bc + 1e-8);
}

TEST_CASE("hellingerWeighted closed form") {
  CHECK(hellingerWeighted(0.3, 0.3, 1.0) == 0.0);
  CHECK(hellingerWeighted(0.25, 0.16, 1.0) == Catch::Approx(0.01).epsilon(1e-12));
  CHECK(hellingerWeighted(0.1, 0.1, 0.9) == Catch::Approx(0.02).epsilon(1e-12));
  CHECK_THROWS_AS(hellingerWeighted(-0.1, 0.1, 0.9), std::invalid_argument);
}

TEST_CASE("partition additivity on a two-block discrete example") {
  // measures on {x1, x2} split into blocks {x1}, {x2}:
  // d^2(rho, eta) = sum_k (sqrt(p_k) - sqrt(q_k))^2 must equal the
  // block-sum of hellingerWeighted terms with unit conditional affinity
  const double p1 = 0.3, p2 = 0.7, q1 = 0.45, q2 = 0.55;
  const double direct = (std::sqrt(p1) - std::sqrt(q1)) * (std::sqrt(p1) - std::sqrt(q1)) +
                        (std::sqrt(p2) - std::sqrt(q2)) * (std::sqrt(p2) - std::sqrt(q2));
  const double blocks = hellingerWeighted(p1, q1, 1.0) + hellingerWeighted(p2, q2, 1.0);
  CHECK(blocks == direct);
}

TEST_CASE("mcEventProb basics") {
  Rng rng(7);
  auto unit = [](Rng& r) { return r.u01(); };
  const MCEstimate always =
      mcEventProb(unit, [](double) { return true; }, 1000, rng);
  CHECK(always.value == 1.0);
  CHECK(always.std_error == 0.0);

  Rng rng2(8);
  const MCEstimate coin =
      mcEventProb(unit, [](double x) { return x < 0.5; }, 1000000, rng2);
  CHECK(std::fabs(coin.value - 0.5) <= 3.0 * coin.std_error);

  Rng rng3(9);
  const MCEstimate seed_empty = mcEventProb(
      [](Rng& r) { return sampleSeed(1.0, 1.0, r); },
      [](const BrownianZeroSummary& z) { return z.empty; }, 1000000, rng3);
  CHECK(std::fabs(seed_empty.value - std::exp(-1.0)) <= 3.0 * seed_empty.std_error);

  Rng rng4(10);
  CHECK_THROWS_AS(mcEventProb(unit, [](double) { return true; }, 10, rng4),
                  std::invalid_argument);
}

TEST_CASE("parallel event probability is thread-count invariant") {
  auto factory = [] { return [](Rng& r) { return sampleSeed(1.0, 0.5, r); }; };
  auto pred = [](const BrownianZeroSummary& z) { return z.empty; };
  const Rng base(123);
  const MCEstimate e1 = mcEventProbParallel(factory, pred, 200000, base, 1);
  const MCEstimate e2 = mcEventProbParallel(factory, pred, 200000, base, 2);
  const MCEstimate e8 = mcEventProbParallel(factory, pred, 200000, base, 8);
  CHECK(e1.value == e2.value);
  CHECK(e1.value == e8.value);
  CHECK(std::fabs(e1.value - std::exp(-0.5)) <= 3.0 * e1.std_error);
}
