#include <catch2/catch_amalgamated.hpp>

#include "rsl/closed_set.hpp"
#include "rsl/rng.hpp"

using namespace rsl;

namespace {

// Random sets with endpoints on a dyadic grid, so that concatenation shifts
// are exact in binary floating point and equality checks are meaningful.
ClosedSet randomDyadicSet(Rng& rng, double horizon_units) {
  const double q = 0x1.0p-20;
  const long h_ticks = static_cast<long>(horizon_units / q);
  const int n = static_cast<int>(rng.next() % 4);
  std::vector<long> ticks;
  for (int i = 0; i < 2 * n; ++i)
    ticks.push_back(static_cast<long>(rng.next() % static_cast<std::uint64_t>(h_ticks + 1)));
  std::sort(ticks.begin(), ticks.end());
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
  std::vector<Interval> iv;
  for (std::size_t i = 0; i + 1 < ticks.size(); i += 2)
    iv.push_back({static_cast<double>(ticks[i]) * q, static_cast<double>(ticks[i + 1]) * q});
  return ClosedSet(horizon_units, std::move(iv));
}

}  // namespace

TEST_CASE("anchor and diam") {
  ClosedSet z(1.0, {{0.2, 0.2}, {0.5, 0.7}});
  CHECK(anchor(z) == 0.2);
  CHECK(diam(z) == Catch::Approx(0.5).margin(1e-15));
  CHECK(anchor(ClosedSet(1.0)) == 0.0);
  CHECK(diam(ClosedSet(1.0)) == 0.0);
  CHECK(anchor(ClosedSet(1.0, {{0.9, 1.0}})) == 0.9);
  CHECK(diam(ClosedSet(1.0, {{0.3, 0.3}})) == 0.0);
}

TEST_CASE("constructor enforces the interval invariants") {
  CHECK_THROWS_AS(ClosedSet(1.0, {{0.5, 0.4}}), std::invalid_argument);
  CHECK_THROWS_AS(ClosedSet(1.0, {{-0.1, 0.4}}), std::invalid_argument);
  CHECK_THROWS_AS(ClosedSet(1.0, {{0.1, 1.4}}), std::invalid_argument);
  CHECK_THROWS_AS(ClosedSet(1.0, {{0.1, 0.5}, {0.5, 0.6}}), std::invalid_argument);
  CHECK_THROWS_AS(ClosedSet(1.0, {{0.5, 0.6}, {0.1, 0.2}}), std::invalid_argument);
  CHECK_THROWS_AS(ClosedSet(0.0), std::invalid_argument);
}

TEST_CASE("concat shifts, keeps horizon additive, merges only at the seam") {
  ClosedSet z1(0.5, {{0.1, 0.2}});
  ClosedSet z2(0.5, {{0.3, 0.4}});
  ClosedSet c = concat(z1, z2);
  CHECK(c.horizon() == 1.0);
  CHECK(c.intervals() == std::vector<Interval>{{0.1, 0.2}, {0.8, 0.9}});

  CHECK(concat(ClosedSet(0.5), ClosedSet(0.5)) == ClosedSet(1.0));

  ClosedSet l(0.5, {{0.4, 0.5}});
  ClosedSet r(0.5, {{0.0, 0.1}});
  CHECK(concat(l, r).intervals() == std::vector<Interval>{{0.4, 0.6}});

  // no merge when the seam is not exactly touched
  ClosedSet r2(0.5, {{0.25, 0.5}});
  CHECK(concat(l, r2).intervals() == std::vector<Interval>{{0.4, 0.5}, {0.75, 1.0}});
}

TEST_CASE("restrict clips exactly and rejects bad windows") {
  ClosedSet z(1.0, {{0.1, 0.6}});
  ClosedSet w = restrict(z, 0.25, 0.75);
  CHECK(w.horizon() == 0.5);
  CHECK(w.intervals() == std::vector<Interval>{{0.0, 0.35}});

  CHECK(restrict(ClosedSet(1.0), 0.2, 0.8).empty());
  CHECK(restrict(ClosedSet(1.0, {{0.2, 0.2}}), 0.3, 0.9).empty());
  // a point sitting exactly on the window edge survives as a point
  CHECK(restrict(ClosedSet(1.0, {{0.2, 0.2}}), 0.2, 0.9).intervals() ==
        std::vector<Interval>{{0.0, 0.0}});

  CHECK_THROWS_AS(restrict(z, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(restrict(z, 0.7, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(restrict(z, -0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(restrict(z, 0.1, 1.5), std::invalid_argument);
}

TEST_CASE("scale multiplies endpoints and round-trips") {
  ClosedSet z(1.0, {{0.5, 1.0}});
  ClosedSet s = scale(z, 2.0);
  CHECK(s.horizon() == 2.0);
  CHECK(s.intervals() == std::vector<Interval>{{1.0, 2.0}});
  CHECK(scale(ClosedSet(1.0), 2.0).empty());

  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    ClosedSet x = randomDyadicSet(rng, 1.0);
    ClosedSet back = scale(scale(x, 2.0), 1.0);
    REQUIRE(back.intervals().size() == x.intervals().size());
    for (std::size_t k = 0; k < x.intervals().size(); ++k) {
      CHECK(back.intervals()[k].lo ==
            Catch::Approx(x.intervals()[k].lo).margin(1e-15));
      CHECK(back.intervals()[k].hi ==
            Catch::Approx(x.intervals()[k].hi).margin(1e-15));
    }
  }
}

TEST_CASE("concat is associative on dyadic sets, exactly") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    ClosedSet z1 = randomDyadicSet(rng, 1.0);
    ClosedSet z2 = randomDyadicSet(rng, 0.5);
    ClosedSet z3 = randomDyadicSet(rng, 2.0);
    CHECK(concat(concat(z1, z2), z3) == concat(z1, concat(z2, z3)));
  }
}

TEST_CASE("restriction inverts concatenation away from the seam") {
  Rng rng(13);
  int tested = 0;
  for (int i = 0; i < 500; ++i) {
    ClosedSet z1 = randomDyadicSet(rng, 1.0);
    ClosedSet z2 = randomDyadicSet(rng, 1.0);
    const double s = z1.horizon();
    if (!z1.empty() && z1.sup() == s) continue;
    if (!z2.empty() && z2.anchor() == 0.0) continue;
    ClosedSet c = concat(z1, z2);
    CHECK(restrict(c, 0.0, s) == z1);
    CHECK(restrict(c, s, c.horizon()) == z2);
    ++tested;
  }
  CHECK(tested > 100);
}

TEST_CASE("anchor/diam interact with concat as expected") {
  Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    ClosedSet z1 = randomDyadicSet(rng, 1.0);
    ClosedSet z2 = randomDyadicSet(rng, 1.0);
    ClosedSet c = concat(z1, z2);
    if (!z1.empty()) CHECK(anchor(c) == anchor(z1));
    CHECK(diam(c) <= c.horizon());
    CHECK(anchor(c) + diam(c) <= c.horizon());
  }
}

TEST_CASE("text serialization round-trips") {
  ClosedSet z(1.0, {{0.1234567890123456, 0.2}, {0.5, 0.7000000000000001}});
  const std::string s = toText(z);
  CHECK(parseClosedSet(s) == z);
  CHECK(toText(ClosedSet(2.0)) == "t=2;EMPTY");
  CHECK(parseClosedSet("t=2;EMPTY") == ClosedSet(2.0));
  CHECK(parseClosedSet(toText(ClosedSet(0.125, {{0.0625, 0.0625}}))) ==
        ClosedSet(0.125, {{0.0625, 0.0625}}));
}

TEST_CASE("marked point sets validate and concatenate") {
  MarkedPointSet z;
  z.horizon = 1.0;
  z.atoms = {{0.25, 0}, {0.5, 1}};
  CHECK_NOTHROW(z.validate());

  MarkedPointSet bad = z;
  bad.atoms.push_back({0.5, 0});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  MarkedPointSet edge;
  edge.horizon = 1.0;
  edge.atoms = {{1.0, 0}};
  CHECK_THROWS_AS(edge.validate(), std::invalid_argument);

  MarkedPointSet w;
  w.horizon = 0.5;
  w.atoms = {{0.125, 2}};
  MarkedPointSet c = concat(z, w);
  CHECK(c.horizon == 1.5);
  REQUIRE(c.atoms.size() == 3);
  CHECK(c.atoms[2].time == 1.125);
  CHECK(c.atoms[2].mark == 2);
  CHECK_NOTHROW(c.validate());
}
