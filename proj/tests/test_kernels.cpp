#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "motbound/kernels.hpp"

using namespace motbound;
using fixtures::kind_of;

namespace {

std::vector<double> uniform_grid(int m, double lo, double hi) {
  std::vector<double> g(m);
  for (int i = 0; i < m; ++i) g[i] = lo + (hi - lo) * i / (m - 1);
  return g;
}

}  // namespace

TEST_CASE("lower hull") {
  const std::vector<double> xs{0, 1, 2}, tent{0, 2, 0};
  auto h = kernels::lower_hull(xs, tent);
  REQUIRE(h.size() == 2);
  CHECK(h[0] == 0);
  CHECK(h[1] == 2);
  CHECK(kernels::lower_hull_at(xs, tent, 1.0) == 0.0);
  const std::vector<double> xs4{0, 1, 2, 3}, cup{3, 0, 0, 3};
  CHECK(kernels::lower_hull_at(xs4, cup, 1.5) == 0.0);
  CHECK(kernels::lower_hull_at(xs4, cup, 0.5) == doctest::Approx(1.5));
  CHECK(kind_of([&] { kernels::lower_hull_at(xs, tent, 2.5); }) == ErrorKind::grid_coverage);
}

TEST_CASE("cell coordinates") {
  const std::vector<std::vector<double>> grids{{0, 1}, {10, 20, 30}};
  CHECK(kernels::cell_count(grids) == 6);
  std::vector<double> s(2);
  kernels::cell_coordinates(grids, 4, s);
  CHECK(s[0] == 1);
  CHECK(s[1] == 20);
}

TEST_CASE("tabulate: serial and parallel agree exactly") {
  const std::vector<std::vector<double>> grids{uniform_grid(37, -2, 2), uniform_grid(53, -3, 3)};
  for (const auto& p : {Payoff::forward_start_straddle(), Payoff::forward_start_call(0.9)}) {
    CHECK(kernels::serial::tabulate(p, grids) == kernels::omp::tabulate(p, grids));
  }
  const std::vector<std::vector<double>> three{uniform_grid(9, 0, 2), uniform_grid(11, 0, 3), uniform_grid(13, 0, 4)};
  auto asian = Payoff::asian_call(3, 1.0);
  CHECK(kernels::serial::tabulate(asian, three) == kernels::omp::tabulate(asian, three));
}

TEST_CASE("tabulate propagates payoff errors from parallel workers") {
  auto bad = Payoff::custom(
      2, [](std::span<const double> s) -> double {
        if (s[0] > 0.5) throw Error(ErrorKind::off_grid, "boom");
        return 0.0;
      },
      0.0);
  const std::vector<std::vector<double>> grids{uniform_grid(9, 0, 1), uniform_grid(9, 0, 1)};
  CHECK(kind_of([&] { kernels::omp::tabulate(bad, grids); }) == ErrorKind::off_grid);
  CHECK(kind_of([&] { kernels::serial::tabulate(bad, grids); }) == ErrorKind::off_grid);
}

TEST_CASE("grid max: serial and parallel agree, first maximizer wins") {
  const std::vector<std::vector<double>> grids{uniform_grid(41, -1, 1), uniform_grid(41, -1, 1)};
  auto f = [](std::span<const double> s) { return -std::abs(s[0] * s[1]); };
  auto a = kernels::serial::grid_max(grids, f);
  auto b = kernels::omp::grid_max(grids, f);
  CHECK(a.value == b.value);
  CHECK(a.index == b.index);
  CHECK(a.value == 0.0);
  CHECK(a.index == 20);
  auto nan = [](std::span<const double> s) { return s[0] > 0.9 ? std::nan("") : 0.0; };
  CHECK(std::isnan(kernels::omp::grid_max(grids, nan).value));
  CHECK(kernels::serial::grid_max(grids, nan).index == kernels::omp::grid_max(grids, nan).index);
}

TEST_CASE("reduced costs: serial and parallel agree exactly") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  kernels::CscMatrix a;
  a.rows = 50;
  a.cols = 9000;
  a.start.push_back(0);
  for (std::size_t j = 0; j < a.cols; ++j) {
    for (std::size_t r = j % 7; r < a.rows; r += 11) {
      a.index.push_back(r);
      a.value.push_back(u(rng));
    }
    a.start.push_back(a.index.size());
  }
  std::vector<double> cost(a.cols), y(a.rows), x(a.cols), z(a.cols);
  for (auto& c : cost) c = u(rng);
  for (auto& v : y) v = u(rng);
  kernels::serial::reduced_costs(a, cost, y, x);
  kernels::omp::reduced_costs(a, cost, y, z);
  CHECK(x == z);
}

TEST_CASE("envelopes: serial and parallel agree exactly") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  auto xs = uniform_grid(60, -2, 2);
  std::vector<double> ys(60 * 30), at(30);
  for (auto& v : ys) v = u(rng);
  for (auto& v : at) v = u(rng);
  CHECK(kernels::serial::envelopes_at(xs, ys, at) == kernels::omp::envelopes_at(xs, ys, at));
  at[3] = 5.0;
  CHECK(kind_of([&] { kernels::omp::envelopes_at(xs, ys, at); }) == ErrorKind::grid_coverage);
}

TEST_CASE("thread cap") {
  const int before = kernels::max_threads();
  kernels::set_max_threads(1);
  CHECK(kernels::max_threads() == 1);
  kernels::set_max_threads(before);
}
