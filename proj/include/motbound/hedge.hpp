#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motbound/coupling.hpp"
#include "motbound/measures.hpp"
#include "motbound/payoff.hpp"
#include "motbound/piecewise_linear.hpp"

namespace motbound {

enum class HedgeSense { sub, super };
std::string_view to_string(HedgeSense sense);

/// Delta held over (s_j, s_{j+1}) as a function of the history s_1..s_j,
/// tabulated on atom grids. Off-grid histories use the nearest atom per date.
struct DeltaTable {
  std::vector<std::vector<double>> grids;
  std::vector<double> values;

  double operator()(std::span<const double> history) const;
  double max_abs() const;
};

/// Psi(s) = cash + sum_i u_i(s_i) + sum_j Delta_j(s_1..s_j) (s_{j+1} - s_j).
struct SemiStaticHedge {
  double cash = 0.0;
  std::vector<PiecewiseLinear> statics;
  std::vector<DeltaTable> deltas;
  HedgeSense sense = HedgeSense::sub;

  std::size_t dates() const { return statics.size(); }
  double operator()(std::span<const double> s) const;
};

/// Cost of the hedge: cash + sum_i E_{mu_i} u_i. Deltas are free.
double price(const SemiStaticHedge& hedge, const MarginalSystem& system);

struct CallLeg {
  std::size_t date = 0;
  double strike = 0.0;
  double quantity = 0.0;
};

/// cash + sum_i forwards[i] s_i + sum_legs q (s_date - K)^+
struct CallPortfolio {
  double cash = 0.0;
  std::vector<double> forwards;
  std::vector<CallLeg> legs;

  // Contribution of one date including the cash.
  double value(std::size_t date, double x) const;
};

CallPortfolio to_call_portfolio(const PiecewiseLinear& u, std::size_t date = 0);
CallPortfolio to_call_portfolio(const SemiStaticHedge& hedge);

struct VerificationReport {
  double tolerance = 1e-8;
  std::vector<std::size_t> grid_sizes;
  // Worst of Psi - Phi (sub) or Phi - Psi (super) over the grid product.
  double max_violation = 0.0;
  std::vector<double> worst_cell;
  bool valid = true;
  // Exact check along the last coordinate between kinks, when the payoff
  // exposes its kinks.
  bool continuum_checked = false;
  double continuum_violation = 0.0;
  std::vector<double> continuum_worst;
  double tail_slope_violation = 0.0;
  bool continuum_valid = true;
  double max_wing_slope = 0.0;
  double wing_slope_bound = 0.0;
  bool wing_slopes_ok = true;
};

inline constexpr double kVerifyTolerance = 1e-8;

/// Atoms of every date, with the last date refined once by midpoints.
std::vector<std::vector<double>> verification_grids(const MarginalSystem& system);
std::vector<double> refine(std::span<const double> points);

VerificationReport verify(const SemiStaticHedge& hedge, const Payoff& payoff,
                          const std::vector<std::vector<double>>& grids,
                          double tol = kVerifyTolerance);

/// max over support cells of |Phi - Psi|.
double slackness(const SemiStaticHedge& hedge, const Coupling& coupling, const Payoff& payoff);

/// Moves beta * (s_{j+1} - s_j) from the statics into Delta_j (j zero based);
/// the hedge function is unchanged.
SemiStaticHedge transfer_affine(const SemiStaticHedge& hedge, std::size_t j, double beta);

enum class VerdictKind { buy, sell, no_arb };
std::string_view to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::no_arb;
  double quoted = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double edge = 0.0;  // positive profit per unit, 0 for no_arb
  std::string description;
};

/// BUY if quoted < lower - tol, SELL if quoted > upper + tol. A negative
/// tol means 1e-6 (1 + |quoted|).
Verdict check_arbitrage(double quoted, double lower, double upper, double tol = -1.0);

}  // namespace motbound
