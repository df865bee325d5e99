#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rsl/quadrature.hpp"
#include "rsl/special.hpp"
#include "rsl/stats.hpp"

using namespace rsl;

namespace {

// 40-term series oracle for I0, summed independently of the implementation's
// stopping rule and crossover.
double besselI0SeriesOracle(double x) {
  long double q = 0.25L * static_cast<long double>(x) * x;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k <= 120; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("normalCdf matches the erfc-based reference") {
  // reference values computed at 40-digit precision
  CHECK(normalCdf(0.0) == Catch::Approx(0.5).margin(1e-16));
  CHECK(normalCdf(1.0) == Catch::Approx(0.84134474606854294859).margin(1e-15));
  CHECK(normalCdf(2.0) == Catch::Approx(0.97724986805182079280).margin(1e-15));
  CHECK(normalCdf(0.1) == Catch::Approx(0.53982783727702898147).margin(1e-15));
  CHECK(normalCdf(3.0) == Catch::Approx(0.99865010196836990547).margin(1e-15));
  CHECK(normalCdf(-5.0) == Catch::Approx(2.8665157187919391167e-7).margin(1e-15));
}

TEST_CASE("normalCdf symmetry identity") {
  for (double x : {0.3, 1.7, 2.9, 4.2})
    CHECK(normalCdf(-x) == Catch::Approx(1.0 - normalCdf(x)).margin(1e-15));
}

TEST_CASE("besselI0 against the series oracle") {
  CHECK(besselI0(0.0) == 1.0);
  CHECK(besselI0(1.0) == Catch::Approx(1.2660658777520083356).epsilon(1e-12));
  CHECK(besselI0(10.0) == Catch::Approx(2815.7166284662544715).epsilon(1e-12));
  for (double x : {0.25, 2.0, 5.0, 9.0, 14.0})
    CHECK(besselI0(x) == Catch::Approx(besselI0SeriesOracle(x)).epsilon(1e-12));
  CHECK_THROWS_AS(besselI0(-1.0), std::domain_error);
}

TEST_CASE("besselI0 series/asymptotic crossover is continuous") {
  // reference values straddling x = 15
  CHECK(besselI0(14.9) == Catch::Approx(308375.57868743909406).epsilon(1e-12));
  CHECK(besselI0(15.0) == Catch::Approx(339649.37329791387952).epsilon(1e-12));
  CHECK(besselI0(15.1) == Catch::Approx(374103.41119040911354).epsilon(1e-12));
  const double below = besselI0(std::nextafter(15.0, 0.0));
  const double above = besselI0(std::nextafter(15.0, 20.0));
  CHECK(std::fabs(below - above) / above < 1e-11);
}

TEST_CASE("besselI0Scaled stays accurate for large arguments") {
  CHECK(besselI0Scaled(100.0) == Catch::Approx(0.039944379299096682648).epsilon(1e-12));
  CHECK(besselI0Scaled(10000.0) == Catch::Approx(0.0039894726746047321064).epsilon(1e-12));
  CHECK(besselI0Scaled(20.0) == Catch::Approx(43558282.559553533272 * std::exp(-20.0)).epsilon(1e-12));
}

TEST_CASE("hittingDensity point value and normalization") {
  CHECK(hittingDensity(1.0, 1.0) == Catch::Approx(0.2419707245191433498).epsilon(1e-12));
  CHECK_THROWS_AS(hittingDensity(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(hittingDensity(1.0, 0.0), std::domain_error);

  // normalization via the substitution x = a^2 / y^2:
  // int_0^inf f_a(x) dx = int_0^inf sqrt(2/pi) e^{-y^2/2} dy = 1
  const double a = 1.3;
  auto g = [a](double y) {
    return std::sqrt(2.0 / kPi) * std::exp(-0.5 * y * y);
  };
  double total = integrateAdaptive(g, 0.0, 40.0, 1e-12, 1e-11);
  CHECK(total == Catch::Approx(1.0).margin(1e-10));
  // and directly against the density over a wide window plus survival bound
  Density1D fa;
  fa.lo = 0.0;
  fa.hi = std::numeric_limits<double>::infinity();
  fa.eval = [a](double x) { return hittingDensity(a, x); };
  const double mass = quadSingular(fa, 1e-6, std::numeric_limits<double>::infinity());
  CHECK(mass == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("hitting survival equals 2 Phi(a/sqrt(t)) - 1") {
  CHECK(hittingSurvival(1.0, 1.0) == Catch::Approx(0.68268949213708589717).epsilon(1e-14));
  CHECK(hittingSurvival(2.0, 1.0) == Catch::Approx(0.95449973610364158560).epsilon(1e-14));
  CHECK(hittingSurvival(1.0, 1.0) ==
        Catch::Approx(2.0 * normalCdf(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("arcsinePhi closed form and quadrature agree") {
  CHECK(arcsinePhi(0.0, 1.0) == 1.0);
  CHECK(arcsinePhi(2.0, 1.0) == Catch::Approx(0.4657596075936404365).epsilon(1e-12));
  CHECK(arcsinePhi(4.0, 0.5) == Catch::Approx(arcsinePhi(2.0, 1.0)).epsilon(1e-14));

  for (auto [c, T] : {std::pair{2.0, 1.0}, {10.0, 1.0}, {0.7, 3.0}, {100.0, 0.3}}) {
    Density1D arc;
    arc.lo = 0.0;
    arc.hi = T;
    arc.singular_lo = arc.singular_hi = true;
    const double cc = c, TT = T;
    arc.eval = [cc, TT](double s) {
      return std::exp(-cc * s) / (kPi * std::sqrt(s * (TT - s)));
    };
    const double quad = quadSingular(arc, 0.0, T);
    CHECK(quad == Catch::Approx(arcsinePhi(c, T)).epsilon(1e-8));
  }
}

TEST_CASE("arcsinePhi is decreasing in cT and bounded by 1") {
  double prev = 1.0;
  for (double x : {0.1, 0.5, 1.0, 3.0, 10.0, 40.0, 200.0}) {
    const double v = arcsinePhi(x, 1.0);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("quadSingular normalizes the arcsine and Gamma(1/2) densities") {
  Density1D arc;
  arc.lo = 0.0;
  arc.hi = 2.5;
  arc.singular_lo = arc.singular_hi = true;
  arc.eval = [](double s) { return 1.0 / (kPi * std::sqrt(s * (2.5 - s))); };
  CHECK(quadSingular(arc, 0.0, 2.5) == Catch::Approx(1.0).epsilon(1e-9));

  Density1D wc;
  wc.lo = 0.0;
  wc.hi = std::numeric_limits<double>::infinity();
  wc.singular_lo = true;
  wc.eval = [](double g) { return std::sqrt(1.0 / kPi) * std::exp(-g) / std::sqrt(g); };
  CHECK(quadSingular(wc, 0.0, std::numeric_limits<double>::infinity()) ==
        Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("quadSingular honors log-scale evaluators") {
  Density1D d;
  d.lo = 0.0;
  d.hi = 1.0;
  d.log_scale = true;
  d.eval = [](double x) { return -x; };  // density e^{-x}
  CHECK(quadSingular(d, 0.0, 1.0) == Catch::Approx(1.0 - std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("quadSingular rejects windows outside the support") {
  Density1D d;
  d.lo = 0.0;
  d.hi = 1.0;
  d.eval = [](double) { return 1.0; };
  CHECK_THROWS_AS(quadSingular(d, -0.1, 0.5), QuadratureError);
  CHECK_THROWS_AS(quadSingular(d, 0.0, 1.5), QuadratureError);
}

TEST_CASE("quadSingular reports non-integrable configurations") {
  // 1/x is not integrable at 0 and the declared inverse-square-root
  // substitution cannot tame it
  Density1D d;
  d.lo = 0.0;
  d.hi = 1.0;
  d.singular_lo = true;
  d.eval = [](double x) { return 1.0 / x; };
  CHECK_THROWS_AS(quadSingular(d, 0.0, 1.0), QuadratureError);
}

TEST_CASE("chi-square p-value sanity") {
  // median of chi2(k) is close to k - 2/3
  CHECK(chiSquarePValue(19.0 - 2.0 / 3.0, 19) == Catch::Approx(0.5).margin(0.01));
  CHECK(chiSquarePValue(43.82, 19) == Catch::Approx(0.001).margin(1e-4));
  CHECK(chiSquarePValue(0.0, 5) == 1.0);
}
