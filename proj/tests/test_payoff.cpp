#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "motbound/payoff.hpp"

using namespace motbound;
using fixtures::kind_of;

TEST_CASE("built-in payoffs") {
  CHECK(Payoff::forward_start_call(1.0)(1.0, 1.5) == doctest::Approx(0.5));
  CHECK(Payoff::forward_start_call(1.2)(2.0, 2.0) == 0.0);
  CHECK(Payoff::forward_start_call(0.5)(2.0, 2.0) == doctest::Approx(1.0));
  CHECK(Payoff::forward_start_straddle()(-1, -2) == doctest::Approx(1.0));
  CHECK(Payoff::negated_straddle()(1, 3) == doctest::Approx(-2.0));
  const double s[3] = {1, 2, 6};
  CHECK(Payoff::asian_call(3, 2.0).evaluate(s) == doctest::Approx(1.0));
  CHECK(Payoff::lookback_call(3, 4.0).evaluate(s) == doctest::Approx(2.0));
}

TEST_CASE("payoff dimension is checked") {
  const double s[3] = {1, 2, 3};
  CHECK(kind_of([&] { Payoff::forward_start_straddle().evaluate(s); }) == ErrorKind::dimension_mismatch);
  CHECK(kind_of([&] { tabulate(Payoff::forward_start_straddle(), {{1.0}}); }) == ErrorKind::dimension_mismatch);
}

TEST_CASE("payoff kind names") {
  CHECK(to_string(PayoffKind::asian_call) == "asian_call");
  CHECK(payoff_kind_from_string("straddle") == PayoffKind::forward_start_straddle);
  CHECK(payoff_kind_from_string("lookback_call") == PayoffKind::lookback_call);
  CHECK(kind_of([] { payoff_kind_from_string("butterfly"); }) == ErrorKind::invalid_input);
}

TEST_CASE("tabulated payoff looks up grid points and rejects others") {
  auto p = Payoff::tabulated({{0, 1}, {0, 1, 2}}, {0, 1, 2, 3, 4, 5});
  CHECK(p(1, 2) == 5);
  CHECK(p(0, 1) == 1);
  CHECK(p(1.0 + 1e-14, 0) == 3);
  CHECK(kind_of([&] { p(0.5, 0); }) == ErrorKind::off_grid);
  CHECK_FALSE(p.last_coordinate_kinks(std::vector<double>{0.0}).has_value());
  CHECK(kind_of([] { Payoff::tabulated({{0, 1}}, {1, 2, 3}); }) == ErrorKind::dimension_mismatch);
  CHECK(kind_of([] { Payoff::tabulated({{1, 0}}, {1, 2}); }) == ErrorKind::bad_spec);
}

TEST_CASE("tabulated growth constant covers negative values") {
  auto p = Payoff::tabulated({{-1, 1}, {-1, 1}}, {-6, 0, 0, 0});
  CHECK(p.growth_constant() == doctest::Approx(2.0));
  CHECK(growth_certificate_margin(p, 200, 3) >= 0.0);
}

TEST_CASE("growth certificates of built-in payoffs hold") {
  for (const auto& p : {Payoff::forward_start_call(1.0), Payoff::forward_start_straddle(), Payoff::negated_straddle()}) {
    CHECK(growth_certificate_margin(p, 500, 9) >= 0.0);
  }
  CHECK(growth_certificate_margin(Payoff::asian_call(3, 1.0), 500, 9) >= 0.0);
  CHECK(growth_certificate_margin(Payoff::lookback_call(4, 1.0), 500, 9) >= 0.0);
}

TEST_CASE("custom payoffs must register a growth constant") {
  auto fn = [](std::span<const double> s) { return s[0]; };
  CHECK(kind_of([&] { Payoff::custom(1, fn, -1.0); }) == ErrorKind::bad_spec);
  CHECK(kind_of([&] { Payoff::custom(1, {}, 1.0); }) == ErrorKind::bad_spec);
  auto p = Payoff::custom(1, fn, 1.0);
  const double s[1] = {-3};
  CHECK(p.evaluate(s) == -3);
}

TEST_CASE("last-coordinate kinks") {
  const double one[1] = {2.0};
  CHECK(Payoff::forward_start_call(1.5).last_coordinate_kinks(one)->at(0) == doctest::Approx(3.0));
  CHECK(Payoff::forward_start_straddle().last_coordinate_kinks(one)->at(0) == 2.0);
  const double two[2] = {1.0, 2.0};
  CHECK(Payoff::asian_call(3, 2.0).last_coordinate_kinks(two)->at(0) == doctest::Approx(3.0));
  auto k = *Payoff::lookback_call(3, 0.5).last_coordinate_kinks(two);
  CHECK(k.size() == 2);
}

TEST_CASE("adding a constant keeps values and kinks") {
  auto p = Payoff::forward_start_straddle().plus_constant(-2.0);
  CHECK(p(0, 3) == doctest::Approx(1.0));
  const double one[1] = {0.5};
  CHECK(p.last_coordinate_kinks(one)->at(0) == 0.5);
  CHECK(p.growth_constant() == doctest::Approx(2.0));
}

TEST_CASE("tabulate follows row-major order with the last date fastest") {
  auto v = tabulate(Payoff::forward_start_straddle(), {{0, 1}, {0, 1, 2}});
  REQUIRE(v.size() == 6);
  const double expect[] = {0, 1, 2, 1, 0, 1};
  for (int i = 0; i < 6; ++i) CHECK(v[i] == expect[i]);
}
