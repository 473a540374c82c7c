#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "motbound/coupling.hpp"
#include "motbound/hedge.hpp"
#include "motbound/lp.hpp"
#include "motbound/measures.hpp"
#include "motbound/payoff.hpp"

namespace motbound {

enum class BoundSense { lower, upper };
std::string_view to_string(BoundSense sense);
BoundSense bound_sense_from_string(std::string_view name);

struct MotProblem {
  MarginalSystem system;
  Payoff payoff;
  BoundSense sense = BoundSense::lower;
};

struct MotOptions {
  SolverOptions lp;
  // For three or more dates, drop martingale rows of histories that cross
  // a barrier between two consecutive dates.
  bool prune_histories = true;
  double verify_tolerance = kVerifyTolerance;
};

inline constexpr std::size_t kNoRow = std::numeric_limits<std::size_t>::max();

/// The discrete LP together with the map from rows back to marginal atoms
/// and histories. Column k is the cell with flat index k over `grids`.
struct MotLp {
  LinearProgram lp;
  std::vector<std::vector<double>> grids;
  // marginal_rows[i][k]: row of atom k of date i, kNoRow for the dropped one.
  std::vector<std::vector<std::size_t>> marginal_rows;
  // martingale_rows[j][h]: row of history h over dates 0..j, kNoRow if absent.
  std::vector<std::vector<std::size_t>> martingale_rows;
  std::size_t pruned_histories = 0;
};

MotLp build_lp(const MotProblem& problem, const MotOptions& options = {});

struct MotDiagnostics {
  LpStatus lp_status = LpStatus::optimal;
  long lp_iterations = 0;
  std::size_t redundant_rows = 0;
  double duality_gap = 0.0;
  double max_marginal_residual = 0.0;
  double max_martingale_residual = 0.0;
  double max_slackness_violation = 0.0;
  double hedge_price = 0.0;
  VerificationReport verification;
  bool bland_retry = false;
  std::string hedge_source = "lp";
};

struct MotResult {
  BoundSense sense = BoundSense::lower;
  double value = 0.0;
  Coupling coupling;
  SemiStaticHedge hedge;
  MotDiagnostics diagnostics;
  std::vector<double> barriers;
};

/// Builds the hedge from an optimal LP solution: deltas are detrended to
/// zero weighted mean, the last static is the c-transform of the others on
/// atoms, midpoints and payoff kinks, and statics after the first vanish at
/// their heaviest atom with the constant moved into cash.
SemiStaticHedge extract_hedge(const LpSolution& solution, const MotProblem& problem,
                              const MotLp& mot_lp);

/// Completes the hedge by replacing the last static with the c-transform of
/// the remaining terms over the last-date knots.
void complete_last_static(SemiStaticHedge& hedge, const MotProblem& problem);

/// Throws NotAdmissible, DimensionMismatch, Infeasible, Unbounded,
/// IterationLimit or DegenerateDual.
MotResult bound(const MotProblem& problem, const MotOptions& options = {});

/// Two-date problems only: solves every barrier block on its own and glues
/// the block hedges. Falls back to the monolithic hedge if gluing fails.
MotResult decompose_and_solve(const MotProblem& problem, const MotOptions& options = {});

struct SweepRow {
  double strike = 0.0;
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  bool ok = false;
  std::string error;
};

/// Forward-start call bounds for every strike, solved in parallel.
std::vector<SweepRow> strike_sweep(const MarginalSystem& system, const std::vector<double>& strikes,
                                   const MotOptions& options = {});

/// Extreme point of the martingale transport polytope for a random cost.
Coupling random_feasible_coupling(const MarginalSystem& system, std::uint64_t seed,
                                  const MotOptions& options = {});

struct TransportBounds {
  double comonotone = 0.0;
  double antitone = 0.0;
  double lower() const { return std::min(comonotone, antitone); }
  double upper() const { return std::max(comonotone, antitone); }
};

/// Two-date payoff under the quantile couplings (no martingale constraint).
TransportBounds transport_bounds(const MarginalSystem& system, const Payoff& payoff);

/// Delta of a two-date hedge at each first-date atom and the increments
/// between consecutive atoms.
struct DeltaIncrements {
  std::vector<double> atoms;
  std::vector<double> deltas;
  std::vector<double> increments;
  double min_increment() const;
};

DeltaIncrements delta_increments(const SemiStaticHedge& hedge, const DiscreteMeasure& mu1);

}  // namespace motbound
