#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace motbound {

/// Atomic probability measure on the real line.
///
/// Construction sorts the atoms, merges repeated points, drops zero-weight
/// atoms and renormalizes weights that sum to 1 within 1e-9. The object is
/// immutable afterwards.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<double> points, std::vector<double> weights);

  static DiscreteMeasure dirac(double x);

  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  double mean() const { return mean_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  double front() const { return points_.front(); }
  double back() const { return points_.back(); }

  // Index of the atom of largest weight (lowest index on ties).
  std::size_t heaviest_atom() const;
  // Weight of the atom at exactly x, 0 if x is not an atom.
  double weight_at(double x) const;

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
  double mean_ = 0.0;
};

/// Sum of w(x) * max(x - strike, 0).
double call_price(const DiscreteMeasure& measure, double strike);

struct CallQuote {
  double strike = 0.0;
  double price = 0.0;
};

struct CallCurve {
  int maturity_index = 0;
  std::vector<CallQuote> quotes;  // strictly increasing strikes
};

/// Recovers the measure whose call function interpolates the quotes.
///
/// Atoms sit at the quoted strikes with mass equal to the slope jump of the
/// piecewise-linear call function. If the curve does not reach zero on the
/// right (or does not satisfy put-call parity with s0 on the left), the last
/// (first) segment is continued linearly until it meets the asymptote of
/// slope 0 (-1), and the residual tail mass is placed at that meeting point.
/// Throws ErrorKind::infeasible_curve when no probability measure fits.
DiscreteMeasure from_call_curve(const CallCurve& curve, double s0);

/// Call prices of `measure` at its atoms plus one strike beyond each end.
CallCurve tabulate_call_curve(const DiscreteMeasure& measure, int maturity_index = 0);

struct PairOrder {
  std::size_t date = 0;  // compares date and date + 1 (zero based)
  double worst_violation = 0.0;  // max_K C_date(K) - C_{date+1}(K)
  double worst_strike = 0.0;
};

struct OrderReport {
  bool means_equal = true;
  double max_mean_gap = 0.0;
  std::vector<PairOrder> pairs;
  bool admissible = true;
};

inline constexpr double kOrderTolerance = 1e-10;

/// Convex-order check on consecutive marginals. Call functions are piecewise
/// linear with kinks at atoms, so checking the union of both atom sets is
/// exact.
OrderReport convex_order_report(std::span<const DiscreteMeasure> marginals);

class MarginalSystem {
 public:
  MarginalSystem() = default;
  explicit MarginalSystem(std::vector<DiscreteMeasure> marginals);

  const std::vector<DiscreteMeasure>& marginals() const { return marginals_; }
  const DiscreteMeasure& operator[](std::size_t i) const { return marginals_[i]; }
  std::size_t dates() const { return marginals_.size(); }
  double s0() const { return s0_; }
  bool admissible() const { return admissible_; }
  const OrderReport& order_report() const { return report_; }

 private:
  friend OrderReport check_convex_order(MarginalSystem& system);

  std::vector<DiscreteMeasure> marginals_;
  double s0_ = 0.0;
  bool admissible_ = false;
  OrderReport report_;
};

/// Recomputes the order report and updates system.admissible().
OrderReport check_convex_order(MarginalSystem& system);

/// Density on [lo, hi], not necessarily normalized. Breakpoints mark kinks
/// or jumps of the density so quadrature stays exact on polynomial pieces.
struct DensitySpec {
  double lo = 0.0;
  double hi = 1.0;
  std::function<double(double)> density;
  std::vector<double> breakpoints;
};

enum class Binning { equal_mass, equal_width };

/// Barycentric discretization: each of the m cells keeps its mass at its
/// conditional mean, so the discrete mean equals the continuous one.
DiscreteMeasure discretize(const DensitySpec& spec, int m, Binning binning = Binning::equal_mass);

DensitySpec uniform_density(double lo, double hi);

/// A group of atoms that every martingale coupling of (first, second) keeps
/// together: S1 in (lo, hi) implies S2 in (lo, hi).
struct Block {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  double mass = 0.0;
  DiscreteMeasure first;   // renormalized restriction of mu1
  DiscreteMeasure second;  // renormalized restriction of mu2
};

inline constexpr double kBarrierTolerance = 1e-10;

/// Splits the pair at every gap of the merged atom set on which both call
/// functions coincide. The reported level inside a gap [p, q] is the
/// boundary between the cells of p and q when the later marginal is read as
/// a barycentric discretization of a locally flat density:
/// p + (q - p) * w2(p) / (w2(p) + w2(q)), falling back to the midpoint.
std::vector<Block> detect_barriers(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                                   double tol = kBarrierTolerance);

/// Interior barrier levels of a decomposition (the `hi` of all but the last block).
std::vector<double> barrier_levels(std::span<const Block> blocks);

/// Truncated non-attainment instance: mu2 uniform on [0, 2] split into blocks
/// I_n = [sum_{i<n} 1/i^2, sum_{i<=n} 1/i^2] for n <= blocks plus the residual
/// block up to 2; mu1 has one atom at each block midpoint carrying half the
/// block length. mu2 is discretized with `atoms_per_block` equal cells per block.
MarginalSystem counterexample_marginals(int blocks, int atoms_per_block);

}  // namespace motbound
