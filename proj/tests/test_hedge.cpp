#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "motbound/hedge.hpp"
#include "motbound/mot.hpp"

using namespace motbound;
using fixtures::kind_of;

namespace {

SemiStaticHedge flat_hedge(PiecewiseLinear u2) {
  SemiStaticHedge h;
  h.statics = {PiecewiseLinear({0.0}, {0.0}, 0.0, 0.0), std::move(u2)};
  h.deltas = {DeltaTable{{{0.0}}, {0.0}}};
  return h;
}

}  // namespace

TEST_CASE("delta tables use the nearest atom") {
  DeltaTable d{{{-1, 1}}, {3, 5}};
  const double a[1] = {-0.2}, b[1] = {0.2}, c[1] = {9};
  CHECK(d(a) == 3);
  CHECK(d(b) == 5);
  CHECK(d(c) == 5);
  CHECK(d.max_abs() == 5);
  const double two[2] = {0, 0};
  CHECK(kind_of([&] { d(two); }) == ErrorKind::dimension_mismatch);
}

TEST_CASE("hedge value and price") {
  SemiStaticHedge h;
  h.cash = 1.0;
  h.statics = {PiecewiseLinear::continued({-1, 1}, {2, 0}), PiecewiseLinear::continued({-2, 2}, {0, 4})};
  h.deltas = {DeltaTable{{{-1, 1}}, {1, -1}}};
  const double s[2] = {-1, 2};
  CHECK(h(s) == doctest::Approx(1.0 + 2.0 + 4.0 + 1.0 * 3.0));
  const double bad[1] = {0};
  CHECK(kind_of([&] { h(bad); }) == ErrorKind::dimension_mismatch);
  auto sys = fixtures::instance_a();
  CHECK(price(h, sys) == doctest::Approx(1.0 + 1.0 + 2.0));
}

TEST_CASE("call portfolios reproduce the static") {
  PiecewiseLinear u({-1, 0, 2}, {1, -1, 3}, -0.5, 4.0);
  auto p = to_call_portfolio(u, 1);
  REQUIRE(p.forwards.size() == 2);
  CHECK(p.forwards[1] == -0.5);
  CHECK(p.legs.size() == 3);
  for (double x = -4; x <= 5; x += 0.25) CHECK(p.value(1, x) == doctest::Approx(u(x)));
  for (const auto& leg : p.legs) CHECK(leg.date == 1);
}

TEST_CASE("sampled quadratic u2 as calls") {
  auto u2 = [](double s) {
    if (s <= -1) return -3 - 3 * s - 2 * s * s / 3;
    if (s >= 1) return -3 + 3 * s - 2 * s * s / 3;
    return -(9 - 5 * s * s) / 6;
  };
  std::vector<double> k, v;
  for (int i = 0; i <= 50; ++i) {
    k.push_back(-2 + 4.0 * i / 50);
    v.push_back(u2(k.back()));
  }
  // Left wing continues the first segment, right wing is flat.
  PiecewiseLinear u(k, v, (v[1] - v[0]) / (k[1] - k[0]), 0.0);
  auto p = to_call_portfolio(u, 1);
  CHECK(p.legs.size() == 50);
  for (std::size_t i = 0; i < k.size(); ++i) CHECK(std::abs(p.value(1, k[i]) - v[i]) <= 1e-12);
}

TEST_CASE("a whole hedge as one portfolio") {
  auto r = bound({fixtures::instance_a(), Payoff::forward_start_straddle(), BoundSense::lower});
  auto p = to_call_portfolio(r.hedge);
  double cost = p.cash;
  auto sys = fixtures::instance_a();
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < sys[i].size(); ++k) {
      double x = sys[i].points()[k];
      double v = p.forwards[i] * x;
      for (const auto& leg : p.legs) {
        if (leg.date == i) v += leg.quantity * std::max(x - leg.strike, 0.0);
      }
      cost += sys[i].weights()[k] * v;
    }
  }
  CHECK(cost == doctest::Approx(7.0 / 6));
}

TEST_CASE("verification grids refine the last date") {
  auto g = verification_grids(fixtures::instance_a());
  REQUIRE(g.size() == 2);
  CHECK(g[0].size() == 2);
  CHECK(g[1].size() == 5);
  CHECK(g[1][1] == -1.0);
  CHECK(refine(std::vector<double>{}).empty());
}

TEST_CASE("verify finds grid violations") {
  auto h = flat_hedge(PiecewiseLinear({0.0}, {0.5}, 0.0, 0.0));
  auto rep = verify(h, Payoff::forward_start_straddle(), {{0.0}, {-1.0, 0.0, 1.0}});
  CHECK_FALSE(rep.valid);
  CHECK(rep.max_violation == doctest::Approx(0.5));
  CHECK(rep.worst_cell[1] == 0.0);
  h.sense = HedgeSense::super;
  auto sup = verify(h, Payoff::forward_start_straddle(), {{0.0}, {-1.0, 0.0, 1.0}});
  CHECK(sup.max_violation == doctest::Approx(0.5));
  CHECK_FALSE(sup.valid);
}

TEST_CASE("the continuum check catches violations between grid points") {
  auto h = flat_hedge(PiecewiseLinear({-1.0, 1.0}, {1.0, 1.0}, -1.0, 1.0));
  auto rep = verify(h, Payoff::forward_start_straddle(), {{0.0}, {-1.0, 1.0}});
  CHECK(rep.valid);
  REQUIRE(rep.continuum_checked);
  CHECK_FALSE(rep.continuum_valid);
  CHECK(rep.continuum_violation == doctest::Approx(1.0));
  CHECK(rep.continuum_worst[1] == 0.0);
}

TEST_CASE("the continuum check catches steep wings") {
  auto h = flat_hedge(PiecewiseLinear({-1.0, 1.0}, {0.0, 0.0}, 0.0, 2.0));
  auto rep = verify(h, Payoff::forward_start_straddle(), {{0.0}, {-1.0, 1.0}});
  CHECK(rep.valid);
  CHECK(rep.continuum_violation <= 0.0);
  CHECK(rep.tail_slope_violation == doctest::Approx(1.0));
  CHECK_FALSE(rep.continuum_valid);
}

TEST_CASE("slackness on the optimal coupling") {
  auto r = bound({fixtures::instance_a(), Payoff::forward_start_straddle(), BoundSense::lower});
  CHECK(slackness(r.hedge, r.coupling, Payoff::forward_start_straddle()) <= 1e-9);
  auto shifted = r.hedge;
  shifted.cash -= 0.1;
  CHECK(slackness(shifted, r.coupling, Payoff::forward_start_straddle()) == doctest::Approx(0.1));
}

TEST_CASE("affine transfer leaves the hedge function unchanged") {
  auto r = bound({fixtures::trapezoid_instance(11), Payoff::forward_start_straddle(), BoundSense::lower});
  auto moved = transfer_affine(r.hedge, 0, 0.7);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 50; ++t) {
    const double s[2] = {u(rng), u(rng)};
    CHECK(moved(s) == doctest::Approx(r.hedge(s)).epsilon(1e-12));
  }
  CHECK(kind_of([&] { transfer_affine(r.hedge, 1, 0.1); }) == ErrorKind::dimension_mismatch);
}

TEST_CASE("arbitrage verdicts") {
  auto none = check_arbitrage(0.30, 0.25, 1.0 / 3);
  CHECK(none.kind == VerdictKind::no_arb);
  CHECK(none.edge == 0.0);
  auto sell = check_arbitrage(0.40, 0.25, 1.0 / 3);
  CHECK(sell.kind == VerdictKind::sell);
  CHECK(sell.edge == doctest::Approx(0.4 - 1.0 / 3));
  auto buy = check_arbitrage(0.20, 0.25, 1.0 / 3);
  CHECK(buy.kind == VerdictKind::buy);
  CHECK(buy.edge == doctest::Approx(0.05));
  CHECK(check_arbitrage(0.25 - 1e-7, 0.25, 1.0 / 3).kind == VerdictKind::no_arb);
  CHECK(check_arbitrage(0.25 - 1e-7, 0.25, 1.0 / 3, 1e-9).kind == VerdictKind::buy);
  CHECK(to_string(VerdictKind::sell) == "SELL");
  CHECK(kind_of([] { check_arbitrage(std::nan(""), 0, 1); }) == ErrorKind::invalid_input);
}
