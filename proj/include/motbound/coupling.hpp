#pragma once

#include <cstddef>
#include <vector>

#include "motbound/measures.hpp"

namespace motbound {

class Payoff;

/// Sparse joint law on a grid product. Cells are flat indices in row-major
/// date order (last date fastest); only positive masses are stored.
struct Coupling {
  std::vector<std::vector<double>> grids;
  std::vector<std::size_t> cells;
  std::vector<double> masses;

  std::size_t dates() const { return grids.size(); }
  double total_mass() const;
  double expectation(const Payoff& payoff) const;
  std::vector<double> coordinates(std::size_t k) const;
  // Mass per grid point of one date.
  std::vector<double> marginal(std::size_t date) const;
};

/// max over dates and atoms of |coupling marginal - measure weight|.
double marginal_residual(const Coupling& coupling, const MarginalSystem& system);

/// max over j and histories (x_1..x_j) of |sum q (x_{j+1} - x_j)|.
double martingale_residual(const Coupling& coupling);

/// Quantile (north-west corner) coupling of two measures; antitone pairs the
/// lowest atoms of mu1 with the highest of mu2.
Coupling monotone_coupling(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2, bool antitone);

}  // namespace motbound
