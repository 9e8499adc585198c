#include <doctest.h>

#include <cmath>

#include "spheresync/rng.hpp"
#include "spheresync/weights.hpp"

using namespace spheresync;

TEST_CASE("constant family is flat with exact bounds") {
  const auto f = WeightFamily::constant(2.5);
  CHECK(f(0, 1, 0.0) == 2.5);
  CHECK(f(3, 0, 1.7) == 2.5);
  REQUIRE(f.bounds().lower_bound.has_value());
  CHECK(*f.bounds().lower_bound == 2.5);
  CHECK(f.bounds().upper_bound == 2.5);
  CHECK(f.bounds().global_upper == 2.5);
  CHECK(f.bounds().lipschitz == 0.0);
  CHECK_THROWS_AS(WeightFamily::constant(0.0), Error);
  CHECK_THROWS_AS(WeightFamily::constant(-1.0), Error);
}

TEST_CASE("identity family returns its argument") {
  const auto f = WeightFamily::identity();
  CHECK(f(0, 1, 0.3) == 0.3);
  CHECK(f(5, 2, 2.0) == 2.0);
  CHECK(f(0, 1, 0.0) == 0.0);
  // vanishes only at s = 0, so no positive floor
  CHECK_FALSE(f.bounds().lower_bound.has_value());
  CHECK(f.bounds().upper_bound == 2.0);
  CHECK(f.bounds().lipschitz == 1.0);
  CHECK_THROWS_AS(f(0, 1, -0.1), Error);
}

TEST_CASE("bounded rational family saturates") {
  const auto f = WeightFamily::bounded_rational();
  CHECK(f(0, 1, 0.0) == 0.0);
  CHECK(f(0, 1, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(f(0, 1, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(f.bounds().upper_bound == doctest::Approx(2.0 / 3.0));
  // increasing on [0, 2]
  double prev = -1.0;
  for (int k = 0; k <= 40; ++k) {
    const double v = f(0, 1, 0.05 * k);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("declared Lipschitz constants hold on a grid") {
  const auto families = {WeightFamily::identity(),
                         WeightFamily::bounded_rational()};
  for (const auto& f : families) {
    const double lip = f.bounds().lipschitz;
    for (int a = 0; a < 200; ++a)
      for (int b = a + 1; b <= 200; ++b) {
        const double sa = 0.01 * a, sb = 0.01 * b;
        CHECK(std::abs(f(0, 1, sa) - f(0, 1, sb)) <=
              lip * std::abs(sa - sb) + 1e-12);
      }
  }
}

TEST_CASE("edge table families key on the ordered pair") {
  const auto f = WeightFamily::edge_constants(
      {{{0, 1}, 3.0}, {{1, 0}, 0.5}}, 1.25);
  CHECK(f(0, 1, 0.7) == 3.0);
  CHECK(f(1, 0, 0.7) == 0.5);
  CHECK(f(2, 0, 0.7) == 1.25);  // fallback
  // argument does not matter for tabular families
  CHECK(f(0, 1, 0.0) == f(0, 1, 2.0));
  REQUIRE(f.bounds().lower_bound.has_value());
  CHECK(*f.bounds().lower_bound == 0.5);
  CHECK(f.bounds().upper_bound == 3.0);
  CHECK_THROWS_AS(
      WeightFamily::edge_constants({{{0, 1}, 0.0}}, 1.0), Error);
  CHECK_THROWS_AS(
      WeightFamily::edge_constants({{{0, 1}, 1.0}}, -2.0), Error);
}

TEST_CASE("random edge constants stay inside the requested range") {
  const auto f = WeightFamily::random_edge_constants(5, 0.2, 1.8, 321);
  double lo = 1e9, hi = -1e9;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      const double v = f(i, j, 1.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      CHECK(v >= 0.2);
      CHECK(v <= 1.8);
    }
  CHECK(hi > lo);  // actually random, not constant
  REQUIRE(f.bounds().lower_bound.has_value());
  CHECK(*f.bounds().lower_bound == doctest::Approx(lo));
  CHECK(f.bounds().upper_bound == doctest::Approx(hi));
  // deterministic per seed
  const auto g = WeightFamily::random_edge_constants(5, 0.2, 1.8, 321);
  CHECK(g(2, 3, 1.0) == f(2, 3, 1.0));
  const auto h = WeightFamily::random_edge_constants(5, 0.2, 1.8, 999);
  bool any_diff = false;
  for (int i = 0; i < 5 && !any_diff; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j && h(i, j, 1.0) != f(i, j, 1.0)) {
        any_diff = true;
        break;
      }
  CHECK(any_diff);
}

TEST_CASE("custom families carry caller bounds") {
  WeightBounds b;
  b.lower_bound = 0.1;
  b.upper_bound = 1.1;
  b.global_upper = 1.1;
  b.lipschitz = 0.5;
  const auto f = WeightFamily::custom(
      "shifted", [](double s) { return 0.1 + 0.5 * s; }, b);
  CHECK(f.name() == "shifted");
  CHECK(f(0, 1, 1.0) == doctest::Approx(0.6));
  CHECK(*f.bounds().lower_bound == 0.1);
}

TEST_CASE("scaling multiplies values and bounds together") {
  const auto f = WeightFamily::identity().scaled_by(3.0);
  CHECK(f(0, 1, 0.5) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(f.bounds().upper_bound == doctest::Approx(6.0));
  CHECK(f.bounds().global_upper == doctest::Approx(6.0));
  CHECK(f.bounds().lipschitz == doctest::Approx(3.0));
  CHECK_THROWS_AS(WeightFamily::identity().scaled_by(0.0), Error);

  const auto g = WeightFamily::constant(2.0).scaled_by(0.5);
  CHECK(g(0, 1, 1.0) == doctest::Approx(1.0));
  REQUIRE(g.bounds().lower_bound.has_value());
  CHECK(*g.bounds().lower_bound == doctest::Approx(1.0));
}
