#pragma once

// Data-parallel inner loops. Every kernel exists twice: `omp` is what the
// library calls, `serial` is the plain reference the tests compare against.
// Both produce identical results; reductions break ties by lowest index so
// the outcome does not depend on the thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace motbound {
class Payoff;
}

namespace motbound::kernels {

/// Compressed sparse column matrix.
struct CscMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> start;  // cols + 1 entries
  std::vector<std::size_t> index;
  std::vector<double> value;
};

struct ArgMax {
  double value = 0.0;
  std::size_t index = 0;
};

using CellFn = std::function<double(std::span<const double>)>;

/// Indices (into xs) of the vertices of the lower convex hull of
/// {(xs[i], ys[i])}; xs strictly increasing. Andrew's monotone chain.
std::vector<std::size_t> lower_hull(std::span<const double> xs, std::span<const double> ys);

/// Value at x of the lower convex envelope of the points; x must lie in
/// [xs.front(), xs.back()].
double lower_hull_at(std::span<const double> xs, std::span<const double> ys, double x);

/// Number of cells of a grid product.
std::size_t cell_count(const std::vector<std::vector<double>>& grids);
/// Coordinates of cell `flat` (last date fastest).
void cell_coordinates(const std::vector<std::vector<double>>& grids, std::size_t flat,
                      std::span<double> out);

namespace serial {

void reduced_costs(const CscMatrix& a, std::span<const double> cost, std::span<const double> y,
                   std::span<double> out);

std::vector<double> tabulate(const Payoff& payoff, const std::vector<std::vector<double>>& grids);

/// max over the grid product of f(cell); the flat index of the first maximizer.
ArgMax grid_max(const std::vector<std::vector<double>>& grids, const CellFn& f);

/// For each row r: envelope of (xs, ys[r * xs.size() ...]) evaluated at at[r].
std::vector<double> envelopes_at(std::span<const double> xs, std::span<const double> ys,
                                 std::span<const double> at);

}  // namespace serial

namespace omp {

void reduced_costs(const CscMatrix& a, std::span<const double> cost, std::span<const double> y,
                   std::span<double> out);

std::vector<double> tabulate(const Payoff& payoff, const std::vector<std::vector<double>>& grids);

ArgMax grid_max(const std::vector<std::vector<double>>& grids, const CellFn& f);

std::vector<double> envelopes_at(std::span<const double> xs, std::span<const double> ys,
                                 std::span<const double> at);

}  // namespace omp

/// Caps the OpenMP worker pool (MOTBOUND_THREADS); values < 1 are ignored.
void set_max_threads(int threads);
int max_threads();

}  // namespace motbound::kernels
