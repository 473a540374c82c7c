#pragma once

#include <span>
#include <vector>

#include "motbound/measures.hpp"
#include "motbound/payoff.hpp"
#include "motbound/piecewise_linear.hpp"

namespace motbound {

/// Lower convex hull of the points as a function; continues the outer hull
/// segments beyond the end points.
PiecewiseLinear convex_envelope(std::span<const double> xs, std::span<const double> ys);

/// u_2 tabulated on a strictly increasing grid.
struct TabulatedU2 {
  std::vector<double> grid;
  std::vector<double> values;

  double operator()(double x) const;
};

/// Atoms of mu2 merged with the atoms of mu1.
std::vector<double> envelope_grid(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2);

/// Samples u on envelope_grid(mu1, mu2).
TabulatedU2 tabulate_u2(const PiecewiseLinear& u, const DiscreteMeasure& mu1, const DiscreteMeasure& mu2);

/// sum mu1 g**(s1) + sum mu2 u2 with g(s2) = Phi(s1, s2) - u2(s2) on the
/// u2 grid. Throws GridCoverage if a mu1 atom lies outside the grid.
double dual_value(const TabulatedU2& u2, const Payoff& payoff, const DiscreteMeasure& mu1,
                  const DiscreteMeasure& mu2);

struct EnvelopeDual {
  TabulatedU2 u2;
  double value = 0.0;
  int sweeps = 0;
  std::vector<PiecewiseLinear> envelopes;  // one per mu1 atom
};

/// Coordinate ascent over the u2 entries with a golden-section line search
/// on each. Deterministic; the value never decreases.
EnvelopeDual improve_u2(const TabulatedU2& start, const Payoff& payoff, const DiscreteMeasure& mu1,
                        const DiscreteMeasure& mu2, int iters);

}  // namespace motbound
