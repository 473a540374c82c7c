#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "motbound/envelope.hpp"
#include "motbound/mot.hpp"

using namespace motbound;
using fixtures::kind_of;

TEST_CASE("convex envelope examples") {
  const std::vector<double> xs{0, 1, 2};
  auto tent = convex_envelope(xs, std::vector<double>{0, 2, 0});
  CHECK(tent(1.0) == 0.0);
  CHECK(tent.knots().size() == 2);
  const std::vector<double> xs4{0, 1, 2, 3}, cup{3, 0, 0, 3};
  auto e = convex_envelope(xs4, cup);
  for (int i = 0; i < 4; ++i) CHECK(e(xs4[i]) == cup[i]);
  CHECK(kind_of([&] { convex_envelope(xs, std::vector<double>{1}); }) == ErrorKind::invalid_input);
}

TEST_CASE("envelope is below, idempotent and monotone") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> xs(25);
  for (int i = 0; i < 25; ++i) xs[i] = i * 0.1 + (i % 3) * 0.01;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> f(25), h(25), ef(25);
    for (int i = 0; i < 25; ++i) {
      f[i] = u(rng);
      h[i] = f[i] + std::abs(u(rng));
    }
    auto env = convex_envelope(xs, f);
    for (int i = 0; i < 25; ++i) {
      ef[i] = env(xs[i]);
      CHECK(ef[i] <= f[i] + 1e-15);
    }
    auto twice = convex_envelope(xs, ef);
    auto envh = convex_envelope(xs, h);
    for (int i = 0; i < 25; ++i) {
      CHECK(twice(xs[i]) == doctest::Approx(ef[i]).epsilon(1e-12));
      CHECK(ef[i] <= envh(xs[i]) + 1e-12);
    }
  }
}

TEST_CASE("tabulated u2 interpolates and refuses to extrapolate") {
  TabulatedU2 u{{0, 1, 3}, {0, 2, 0}};
  CHECK(u(0.5) == 1.0);
  CHECK(u(2.0) == 1.0);
  CHECK(kind_of([&] { u(4.0); }) == ErrorKind::grid_coverage);
}

TEST_CASE("dual value of a zero u2 under the straddle is zero") {
  auto sys = fixtures::instance_a();
  TabulatedU2 z{envelope_grid(sys[0], sys[1]), {}};
  z.values.assign(z.grid.size(), 0.0);
  CHECK(z.grid.size() == 5);
  CHECK(dual_value(z, Payoff::forward_start_straddle(), sys[0], sys[1]) == doctest::Approx(0.0));
}

TEST_CASE("constants added to u2 do not change the dual value") {
  auto sys = fixtures::instance_a();
  TabulatedU2 u{envelope_grid(sys[0], sys[1]), {0.3, -1.0, 0.2, 0.5, 1.1}};
  double v = dual_value(u, Payoff::forward_start_straddle(), sys[0], sys[1]);
  for (double& x : u.values) x += 2.5;
  CHECK(dual_value(u, Payoff::forward_start_straddle(), sys[0], sys[1]) == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("coverage and shape errors") {
  auto sys = fixtures::instance_a();
  TabulatedU2 narrow{{-2, 0}, {0, 0}};
  CHECK(kind_of([&] { dual_value(narrow, Payoff::forward_start_straddle(), sys[0], sys[1]); }) ==
        ErrorKind::grid_coverage);
  TabulatedU2 missing{{-2, -1, 1, 2}, {0, 0, 0, 0}};
  CHECK(kind_of([&] { dual_value(missing, Payoff::forward_start_straddle(), sys[0], sys[1]); }) ==
        ErrorKind::grid_coverage);
  TabulatedU2 ok{envelope_grid(sys[0], sys[1]), {0, 0, 0, 0, 0}};
  CHECK(kind_of([&] { dual_value(ok, Payoff::asian_call(3, 0), sys[0], sys[1]); }) == ErrorKind::dimension_mismatch);
  CHECK(kind_of([&] { improve_u2(narrow, Payoff::forward_start_straddle(), sys[0], sys[1], 3); }) ==
        ErrorKind::grid_coverage);
}

TEST_CASE("LP dual u2 certifies the LP bound and random u2 stay below it") {
  auto sys = fixtures::trapezoid_instance(31);
  Payoff p = Payoff::forward_start_straddle();
  auto r = bound({sys, p, BoundSense::lower});
  auto u2 = tabulate_u2(r.hedge.statics[1], sys[0], sys[1]);
  double v = dual_value(u2, p, sys[0], sys[1]);
  CHECK(std::abs(v - r.value) <= 1e-9);
  auto kept = improve_u2(u2, p, sys[0], sys[1], 1);
  CHECK(kept.value <= v + 1e-8);
  CHECK(kept.value >= v);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0, 0.5);
  for (int t = 0; t < 30; ++t) {
    auto w = u2;
    for (double& x : w.values) x += n(rng);
    CHECK(dual_value(w, p, sys[0], sys[1]) <= r.value + 1e-8);
  }
}

TEST_CASE("ascent from zero reaches the instance A value") {
  auto sys = fixtures::instance_a();
  TabulatedU2 z{envelope_grid(sys[0], sys[1]), {}};
  z.values.assign(z.grid.size(), 0.0);
  auto same = improve_u2(z, Payoff::forward_start_straddle(), sys[0], sys[1], 0);
  CHECK(same.value == doctest::Approx(0.0));
  CHECK(same.u2.values == z.values);
  CHECK(same.sweeps == 0);
  auto e = improve_u2(z, Payoff::forward_start_straddle(), sys[0], sys[1], 200);
  CHECK(std::abs(e.value - 7.0 / 6) <= 1e-3);
  CHECK(e.envelopes.size() == 2);
  auto again = improve_u2(z, Payoff::forward_start_straddle(), sys[0], sys[1], 200);
  CHECK(again.u2.values == e.u2.values);
}
