#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "motbound/measures.hpp"

using namespace motbound;
using fixtures::kind_of;

TEST_CASE("measure construction sorts, merges and drops zero atoms") {
  DiscreteMeasure mu({2, -1, 2, 5}, {0.25, 0.5, 0.25, 0.0});
  REQUIRE(mu.size() == 2);
  CHECK(mu.points()[0] == -1);
  CHECK(mu.points()[1] == 2);
  CHECK(mu.weights()[1] == doctest::Approx(0.5));
  CHECK(mu.mean() == doctest::Approx(0.5));
  CHECK(mu.weight_at(2) == doctest::Approx(0.5));
  CHECK(mu.weight_at(3) == 0.0);
}

TEST_CASE("measure weights are renormalized within 1e-9 and rejected beyond") {
  DiscreteMeasure mu({0, 1}, {0.5, 0.5 + 5e-10});
  CHECK(mu.weights()[0] + mu.weights()[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kind_of([] { DiscreteMeasure({0, 1}, {0.5, 0.6}); }) == ErrorKind::invalid_measure);
  CHECK(kind_of([] { DiscreteMeasure({0, 1}, {1.5, -0.5}); }) == ErrorKind::invalid_measure);
  CHECK(kind_of([] { DiscreteMeasure({0}, {0.5, 0.5}); }) == ErrorKind::invalid_measure);
  CHECK(kind_of([] { DiscreteMeasure({std::nan("")}, {1.0}); }) == ErrorKind::invalid_measure);
}

TEST_CASE("heaviest atom takes the lowest index on ties") {
  DiscreteMeasure mu({-2, 0, 2}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(mu.heaviest_atom() == 0);
  DiscreteMeasure nu({-2, 0, 2}, {0.2, 0.5, 0.3});
  CHECK(nu.heaviest_atom() == 1);
  CHECK(DiscreteMeasure::dirac(3).heaviest_atom() == 0);
}

TEST_CASE("call prices") {
  auto sys = fixtures::instance_a();
  CHECK(call_price(sys[1], 0) == doctest::Approx(2.0 / 3));
  CHECK(call_price(sys[1], -3) == doctest::Approx(3.0));
  CHECK(call_price(sys[1], 2) == 0.0);
}

TEST_CASE("call curve of instance A second marginal gives back its atoms") {
  CallCurve curve{2, {{-2, 2}, {0, 2.0 / 3}, {2, 0}}};
  auto mu = from_call_curve(curve, 0.0);
  REQUIRE(mu.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(mu.points()[i] == doctest::Approx(-2 + 2 * i));
    CHECK(mu.weights()[i] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
}

TEST_CASE("call curve with an open right tail puts the residual mass where the segment meets zero") {
  // C(0) = 1, C(1) = 0.25: slope -0.75 continued reaches 0 at 1 + 1/3.
  CallCurve curve{1, {{0, 1.0}, {1, 0.25}}};
  auto mu = from_call_curve(curve, 1.0);
  CHECK(mu.mean() == doctest::Approx(1.0));
  CHECK(call_price(mu, 0) == doctest::Approx(1.0));
  CHECK(call_price(mu, 1) == doctest::Approx(0.25));
}

TEST_CASE("non-convex or increasing call curves are infeasible") {
  CallCurve concave{1, {{0, 1.0}, {1, 0.8}, {2, 0.0}}};
  CHECK(kind_of([&] { from_call_curve(concave, 1.0); }) == ErrorKind::infeasible_curve);
  CallCurve rising{1, {{0, 1.0}, {1, 1.2}, {2, 0.0}}};
  CHECK(kind_of([&] { from_call_curve(rising, 1.0); }) == ErrorKind::infeasible_curve);
  CallCurve steep{1, {{0, 3.0}, {1, 0.0}}};
  CHECK(kind_of([&] { from_call_curve(steep, 1.0); }) == ErrorKind::infeasible_curve);
}

TEST_CASE("tabulate then invert reproduces random measures") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    auto mu = fixtures::random_measure(rng);
    auto back = from_call_curve(tabulate_call_curve(mu), mu.mean());
    REQUIRE(back.size() == mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      CHECK(std::abs(back.points()[i] - mu.points()[i]) <= 1e-10);
      CHECK(std::abs(back.weights()[i] - mu.weights()[i]) <= 1e-10);
    }
  }
}

TEST_CASE("convex order report") {
  auto sys = fixtures::instance_a();
  CHECK(sys.admissible());
  REQUIRE(sys.order_report().pairs.size() == 1);
  CHECK(sys.order_report().pairs[0].worst_violation <= 0.0);

  MarginalSystem reversed({sys[1], sys[0]});
  CHECK_FALSE(reversed.admissible());
  CHECK(reversed.order_report().means_equal);
  CHECK(reversed.order_report().pairs[0].worst_violation == doctest::Approx(1.0 / 3));
  CHECK(std::abs(reversed.order_report().pairs[0].worst_strike) == doctest::Approx(1));

  MarginalSystem shifted({sys[0], DiscreteMeasure({-1, 3}, {0.5, 0.5})});
  CHECK_FALSE(shifted.order_report().means_equal);
  CHECK(shifted.order_report().max_mean_gap == doctest::Approx(1.0));
  CHECK_FALSE(shifted.admissible());
}

TEST_CASE("spreading an atom pair stays in convex order") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto mu = fixtures::random_measure(rng);
    MarginalSystem sys({mu, fixtures::spread(mu, 0.7), fixtures::spread(fixtures::spread(mu, 0.7), 0.3)});
    CHECK(sys.admissible());
    CHECK(sys.s0() == doctest::Approx(mu.mean()));
  }
}

TEST_CASE("barycentric discretization") {
  auto u2 = discretize(uniform_density(-1, 1), 2);
  REQUIRE(u2.size() == 2);
  CHECK(u2.points()[0] == doctest::Approx(-0.5));
  CHECK(u2.points()[1] == doctest::Approx(0.5));
  CHECK(u2.weights()[0] == doctest::Approx(0.5));

  auto u4 = discretize(uniform_density(-1, 1), 4);
  REQUIRE(u4.size() == 4);
  const double expect[] = {-0.75, -0.25, 0.25, 0.75};
  for (int i = 0; i < 4; ++i) {
    CHECK(u4.points()[i] == doctest::Approx(expect[i]));
    CHECK(u4.weights()[i] == doctest::Approx(0.25));
  }

  auto t3 = discretize(fixtures::trapezoid(), 3);
  REQUIRE(t3.size() == 3);
  double total = 0.0;
  for (double w : t3.weights()) total += w;
  CHECK(total == doctest::Approx(1.0));
  CHECK(t3.mean() == doctest::Approx(0.0).epsilon(1e-12));
  for (double w : t3.weights()) CHECK(w == doctest::Approx(1.0 / 3).epsilon(1e-9));

  auto w4 = discretize(fixtures::trapezoid(), 4, Binning::equal_width);
  REQUIRE(w4.size() == 4);
  CHECK(w4.weights()[0] == doctest::Approx(1.0 / 6));
  CHECK(w4.weights()[1] == doctest::Approx(1.0 / 3));
  CHECK(w4.points()[0] == doctest::Approx(-1.0 - 1.0 / 3));
}

TEST_CASE("discretization keeps the mean and convex order on fine grids") {
  auto sys = fixtures::trapezoid_instance(51);
  CHECK(sys[0].mean() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sys[1].mean() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sys.admissible());
}

TEST_CASE("bad density specs") {
  CHECK(kind_of([] { discretize(uniform_density(1, -1), 4); }) == ErrorKind::bad_spec);
  CHECK(kind_of([] { discretize(uniform_density(-1, 1), 0); }) == ErrorKind::bad_spec);
  DensitySpec negative{0, 1, [](double) { return -1.0; }, {}};
  CHECK(kind_of([&] { discretize(negative, 4); }) == ErrorKind::bad_spec);
  DensitySpec empty;
  CHECK(kind_of([&] { discretize(empty, 4); }) == ErrorKind::bad_spec);
}

TEST_CASE("barriers of the block instance sit at the partial sums of 1/n^2") {
  auto sys = counterexample_marginals(5, 16);
  CHECK(sys.admissible());
  auto blocks = detect_barriers(sys[0], sys[1]);
  REQUIRE(blocks.size() == 6);
  auto levels = barrier_levels(blocks);
  REQUIRE(levels.size() == 5);
  double partial = 0.0;
  for (int n = 1; n <= 5; ++n) {
    partial += 1.0 / (n * n);
    CHECK(std::abs(levels[n - 1] - partial) <= 1e-10);
  }
  for (const auto& b : blocks) {
    CHECK(b.first.size() == 1);
    CHECK(b.second.size() == 16);
    CHECK(b.first.mean() == doctest::Approx(b.second.mean()));
  }
}

TEST_CASE("no barriers when the call functions only touch at atoms") {
  auto sys = fixtures::instance_a();
  CHECK(detect_barriers(sys[0], sys[1]).size() == 1);
  CHECK(barrier_levels(detect_barriers(sys[0], sys[1])).empty());
}

TEST_CASE("identical marginals split at every gap") {
  DiscreteMeasure mu({0, 1, 2}, {0.25, 0.5, 0.25});
  auto blocks = detect_barriers(mu, mu);
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[1].mass == doctest::Approx(0.5));
}
