#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "motbound/lp.hpp"

using namespace motbound;
using fixtures::kind_of;

namespace {

LinearProgram dense(Sense sense, std::vector<double> cost, const std::vector<std::vector<double>>& a,
                    std::vector<double> rhs) {
  LinearProgram lp;
  lp.sense = sense;
  lp.cost = std::move(cost);
  lp.rhs = std::move(rhs);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (a[i][j] != 0.0) lp.triples.push_back({i, j, a[i][j]});
    }
  }
  return lp;
}

// Beale's example, which cycles under the textbook largest-coefficient rule.
LinearProgram beale() {
  return dense(Sense::minimize, {0, 0, 0, -0.75, 150, -0.02, 6},
               {{1, 0, 0, 0.25, -60, -0.04, 9}, {0, 1, 0, 0.5, -90, -0.02, 3}, {0, 0, 1, 0, 0, 1, 0}},
               {0, 0, 1});
}

void check_optimal(const LinearProgram& lp, const LpSolution& s) {
  REQUIRE(s.optimal());
  auto c = check_solution(lp, s);
  CHECK(c.primal_residual <= 1e-9);
  CHECK(c.min_primal >= 0.0);
  CHECK(c.worst_reduced_cost <= 1e-9);
  CHECK(c.duality_gap <= 1e-9 * (1 + std::abs(s.objective)));
  CHECK(std::abs(s.objective - s.dual_objective) <= 1e-9 * (1 + std::abs(s.objective)));
}

}  // namespace

TEST_CASE("minimize and maximize a two-variable LP") {
  auto lp = dense(Sense::minimize, {1, 2}, {{1, 1}}, {1});
  auto s = solve(lp);
  check_optimal(lp, s);
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.dual[0] == doctest::Approx(1.0));

  lp.sense = Sense::maximize;
  auto t = solve(lp);
  check_optimal(lp, t);
  CHECK(t.objective == doctest::Approx(2.0));
  CHECK(t.dual[0] == doctest::Approx(2.0));
  for (double d : t.reduced_costs) CHECK(d <= 1e-12);
}

TEST_CASE("negative right-hand sides") {
  auto lp = dense(Sense::minimize, {3, 1}, {{-1, -1}, {1, -1}}, {-2, 0});
  auto s = solve(lp);
  check_optimal(lp, s);
  CHECK(s.objective == doctest::Approx(4.0));
  CHECK(s.primal[0] == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded") {
  auto inf = dense(Sense::minimize, {1, 1}, {{1, 1}, {1, 1}}, {1, 2});
  CHECK(solve(inf).status == LpStatus::infeasible);
  CHECK(solve_exact(inf).status == LpStatus::infeasible);
  auto unb = dense(Sense::minimize, {-1, 0}, {{1, -1}}, {0});
  CHECK(solve(unb).status == LpStatus::unbounded);
  CHECK(solve_exact(unb).status == LpStatus::unbounded);
  auto neg = dense(Sense::minimize, {1}, {{1}}, {-1});
  CHECK(solve(neg).status == LpStatus::infeasible);
}

TEST_CASE("redundant rows keep a zero multiplier") {
  auto lp = dense(Sense::minimize, {1, 2, 3}, {{1, 1, 1}, {1, 1, 1}, {2, 2, 2}, {0, 1, 1}}, {1, 1, 2, 0.5});
  auto s = solve(lp);
  check_optimal(lp, s);
  CHECK(s.objective == doctest::Approx(1.5));
  CHECK(s.redundant_rows == 2);
  auto e = solve_exact(lp);
  CHECK(e.redundant_rows == 2);
  CHECK(e.exact_objective == "3/2");
  check_optimal(lp, e);
}

TEST_CASE("Beale's example terminates under every rule") {
  auto lp = beale();
  auto d = solve(lp);
  check_optimal(lp, d);
  CHECK(d.objective == doctest::Approx(-0.05));
  SolverOptions bland;
  bland.pricing = Pricing::bland;
  auto b = solve(lp, bland);
  check_optimal(lp, b);
  CHECK(b.objective == doctest::Approx(-0.05));
  SolverOptions stall;
  stall.stall_limit = 1;
  CHECK(solve(lp, stall).objective == doctest::Approx(-0.05));
  auto e = solve_exact(lp);
  CHECK(e.exact_objective == "-1/20");
}

TEST_CASE("iteration limit") {
  SolverOptions opts;
  opts.iteration_limit = 1;
  CHECK(solve(beale(), opts).status == LpStatus::iteration_limit);
}

TEST_CASE("input validation") {
  auto lp = dense(Sense::minimize, {1, 2}, {{1, 1}}, {1});
  lp.triples.push_back({0, 0, 1.0});
  CHECK(kind_of([&] { solve(lp); }) == ErrorKind::invalid_input);
  auto out = dense(Sense::minimize, {1}, {{1}}, {1});
  out.triples.push_back({3, 0, 1.0});
  CHECK(kind_of([&] { solve(out); }) == ErrorKind::invalid_input);
  auto nan = dense(Sense::minimize, {std::nan("")}, {{1}}, {1});
  CHECK(kind_of([&] { solve(nan); }) == ErrorKind::invalid_input);
  LinearProgram empty;
  CHECK(kind_of([&] { solve(empty); }) == ErrorKind::invalid_input);
}

TEST_CASE("exact solver size limit") {
  LinearProgram lp;
  lp.cost.assign(kExactMaxVariables + 1, 1.0);
  lp.rhs = {1.0};
  for (std::size_t j = 0; j < lp.cost.size(); ++j) lp.triples.push_back({0, j, 1.0});
  CHECK(kind_of([&] { solve_exact(lp); }) == ErrorKind::scale_exceeded);
  CHECK(solve_exact(lp, 500).exact_objective == "1");
}

TEST_CASE("revised simplex agrees with the exact oracle on random feasible LPs") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> small(-3, 3);
  std::uniform_int_distribution<int> dims(2, 6);
  for (int t = 0; t < 40; ++t) {
    const int m = dims(rng);
    const int n = m + dims(rng);
    std::vector<std::vector<double>> a(m, std::vector<double>(n));
    for (auto& row : a) {
      for (auto& v : row) v = small(rng);
    }
    if (t % 5 == 0) a[m - 1] = a[0];  // rank deficient
    std::vector<double> x0(n), b(m, 0.0), c(n);
    for (auto& v : x0) v = std::abs(small(rng));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) b[i] += a[i][j] * x0[j];
    }
    for (auto& v : c) v = std::abs(small(rng)) + (t % 2 ? 0.0 : 0.5);
    auto lp = dense(t % 3 == 0 ? Sense::maximize : Sense::minimize, c, a, b);
    auto exact = solve_exact(lp);
    auto fast = solve(lp);
    CAPTURE(t);
    REQUIRE(exact.status == fast.status);
    if (!exact.optimal()) continue;
    check_optimal(lp, fast);
    check_optimal(lp, exact);
    CHECK(std::abs(fast.objective - exact.objective) <= 1e-9 * (1 + std::abs(exact.objective)));
  }
}

TEST_CASE("status names") {
  CHECK(to_string(LpStatus::iteration_limit) == "iteration_limit");
  CHECK(to_string(LpStatus::optimal) == "optimal");
}
