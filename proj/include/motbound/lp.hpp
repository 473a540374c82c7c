#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "motbound/kernels.hpp"

namespace motbound {

enum class Sense { minimize, maximize };

struct Triple {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
};

/// Equality-form LP: optimize cost.x subject to A x = rhs, x >= 0.
struct LinearProgram {
  Sense sense = Sense::minimize;
  std::vector<double> cost;
  std::vector<Triple> triples;
  std::vector<double> rhs;

  std::size_t rows() const { return rhs.size(); }
  std::size_t cols() const { return cost.size(); }

  // Throws ErrorKind::invalid_input on out-of-range or duplicate entries.
  void validate() const;
  kernels::CscMatrix to_csc() const;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };
std::string_view to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> primal;
  // One multiplier per row, in the caller's sense: objective == rhs.dual at
  // the optimum, and cost - A^T dual is >= 0 (minimize) or <= 0 (maximize).
  std::vector<double> dual;
  std::vector<double> reduced_costs;
  double objective = 0.0;
  double dual_objective = 0.0;
  long iterations = 0;
  long phase_one_iterations = 0;
  long bland_iterations = 0;
  std::size_t redundant_rows = 0;
  // Exact solves only: the optimal value as "p/q".
  std::string exact_objective;

  bool optimal() const { return status == LpStatus::optimal; }
};

enum class Pricing { dantzig, bland };

struct SolverOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  long iteration_limit = 1'000'000;
  int refactor_interval = 100;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int stall_limit = 500;
  Pricing pricing = Pricing::dantzig;
};

/// Two-phase revised simplex on a dense LU of the basis with product-form
/// updates. Dantzig pricing falls back to Bland's rule while the method is
/// stalled on degenerate pivots. Rank-deficient row sets are fine: their
/// artificials stay basic at zero and get a zero multiplier.
LpSolution solve(const LinearProgram& lp, const SolverOptions& options = {});

inline constexpr std::size_t kExactMaxVariables = 200;

/// Same contract as solve() with every pivot in exact rational arithmetic
/// (Bland's rule throughout). Input doubles are first rationalized to the
/// simplest fraction within 1e-14 relative. Throws ErrorKind::scale_exceeded
/// beyond `max_variables` columns.
LpSolution solve_exact(const LinearProgram& lp, std::size_t max_variables = kExactMaxVariables);

struct LpCheck {
  double primal_residual = 0.0;  // max |A x - b|
  double min_primal = 0.0;
  double worst_reduced_cost = 0.0;  // most wrong-signed reduced cost (0 if none)
  double duality_gap = 0.0;         // |c.x - b.y|
  double slackness = 0.0;           // max |x_j d_j|
};

LpCheck check_solution(const LinearProgram& lp, const LpSolution& solution);

}  // namespace motbound
