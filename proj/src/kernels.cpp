#include "motbound/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "motbound/error.hpp"
#include "motbound/payoff.hpp"

namespace motbound::kernels {

std::vector<std::size_t> lower_hull(std::span<const double> xs, std::span<const double> ys) {
  std::vector<std::size_t> hull;
  hull.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (hull.size() >= 2) {
      std::size_t o = hull[hull.size() - 2];
      std::size_t a = hull.back();
      double cross = (xs[a] - xs[o]) * (ys[i] - ys[o]) - (ys[a] - ys[o]) * (xs[i] - xs[o]);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  return hull;
}

double lower_hull_at(std::span<const double> xs, std::span<const double> ys, double x) {
  if (xs.empty() || x < xs.front() || x > xs.back()) {
    throw Error(ErrorKind::grid_coverage, "envelope evaluated outside its grid");
  }
  auto hull = lower_hull(xs, ys);
  if (hull.size() == 1) return ys[hull.front()];
  // first hull vertex with abscissa >= x
  auto it = std::lower_bound(hull.begin(), hull.end(), x,
                             [&](std::size_t h, double v) { return xs[h] < v; });
  if (it == hull.begin()) return ys[*it];
  std::size_t b = *it;
  std::size_t a = *(it - 1);
  if (xs[b] == x) return ys[b];
  double t = (x - xs[a]) / (xs[b] - xs[a]);
  return ys[a] + t * (ys[b] - ys[a]);
}

std::size_t cell_count(const std::vector<std::vector<double>>& grids) {
  std::size_t total = 1;
  for (const auto& g : grids) total *= g.size();
  return grids.empty() ? 0 : total;
}

void cell_coordinates(const std::vector<std::vector<double>>& grids, std::size_t flat,
                      std::span<double> out) {
  for (std::size_t d = grids.size(); d-- > 0;) {
    std::size_t m = grids[d].size();
    out[d] = grids[d][flat % m];
    flat /= m;
  }
}

namespace {

bool better(const ArgMax& a, const ArgMax& b) {
  // NaN counts as +inf so that broken cells surface as violations.
  double av = std::isnan(a.value) ? std::numeric_limits<double>::infinity() : a.value;
  double bv = std::isnan(b.value) ? std::numeric_limits<double>::infinity() : b.value;
  return av > bv || (av == bv && a.index < b.index);
}

double column_dot(const CscMatrix& a, std::size_t j, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = a.start[j]; k < a.start[j + 1]; ++k) s += a.value[k] * y[a.index[k]];
  return s;
}

}  // namespace

namespace serial {

void reduced_costs(const CscMatrix& a, std::span<const double> cost, std::span<const double> y,
                   std::span<double> out) {
  for (std::size_t j = 0; j < a.cols; ++j) out[j] = cost[j] - column_dot(a, j, y);
}

std::vector<double> tabulate(const Payoff& payoff, const std::vector<std::vector<double>>& grids) {
  const std::size_t cells = cell_count(grids);
  std::vector<double> out(cells);
  std::vector<double> s(grids.size());
  for (std::size_t c = 0; c < cells; ++c) {
    cell_coordinates(grids, c, s);
    out[c] = payoff.evaluate(s);
  }
  return out;
}

ArgMax grid_max(const std::vector<std::vector<double>>& grids, const CellFn& f) {
  const std::size_t cells = cell_count(grids);
  ArgMax best{-std::numeric_limits<double>::infinity(), 0};
  std::vector<double> s(grids.size());
  for (std::size_t c = 0; c < cells; ++c) {
    cell_coordinates(grids, c, s);
    ArgMax cand{f(s), c};
    if (better(cand, best)) best = cand;
  }
  return best;
}

std::vector<double> envelopes_at(std::span<const double> xs, std::span<const double> ys,
                                 std::span<const double> at) {
  std::vector<double> out(at.size());
  for (std::size_t r = 0; r < at.size(); ++r) {
    out[r] = lower_hull_at(xs, ys.subspan(r * xs.size(), xs.size()), at[r]);
  }
  return out;
}

}  // namespace serial

namespace omp {

void reduced_costs(const CscMatrix& a, std::span<const double> cost, std::span<const double> y,
                   std::span<double> out) {
  const auto cols = static_cast<std::ptrdiff_t>(a.cols);
#pragma omp parallel for schedule(static) if (cols > 4096)
  for (std::ptrdiff_t j = 0; j < cols; ++j) {
    auto uj = static_cast<std::size_t>(j);
    out[uj] = cost[uj] - column_dot(a, uj, y);
  }
}

std::vector<double> tabulate(const Payoff& payoff, const std::vector<std::vector<double>>& grids) {
  const auto cells = static_cast<std::ptrdiff_t>(cell_count(grids));
  std::vector<double> out(static_cast<std::size_t>(cells));
  bool failed = false;
  Error first_error(ErrorKind::invalid_input, "");
#pragma omp parallel
  {
    std::vector<double> s(grids.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < cells; ++c) {
      auto uc = static_cast<std::size_t>(c);
      cell_coordinates(grids, uc, s);
      try {
        out[uc] = payoff.evaluate(s);
      } catch (const Error& e) {
#pragma omp critical
        {
          if (!failed) {
            failed = true;
            first_error = e;
          }
        }
      }
    }
  }
  if (failed) throw first_error;
  return out;
}

ArgMax grid_max(const std::vector<std::vector<double>>& grids, const CellFn& f) {
  const auto cells = static_cast<std::ptrdiff_t>(cell_count(grids));
  ArgMax best{-std::numeric_limits<double>::infinity(), 0};
#pragma omp parallel
  {
    ArgMax local{-std::numeric_limits<double>::infinity(), 0};
    std::vector<double> s(grids.size());
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t c = 0; c < cells; ++c) {
      auto uc = static_cast<std::size_t>(c);
      cell_coordinates(grids, uc, s);
      ArgMax cand{f(s), uc};
      if (better(cand, local)) local = cand;
    }
#pragma omp critical
    {
      if (better(local, best)) best = local;
    }
  }
  return best;
}

std::vector<double> envelopes_at(std::span<const double> xs, std::span<const double> ys,
                                 std::span<const double> at) {
  const auto rows = static_cast<std::ptrdiff_t>(at.size());
  std::vector<double> out(at.size());
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    auto ur = static_cast<std::size_t>(r);
    const double x = at[ur];
    if (xs.empty() || x < xs.front() || x > xs.back()) {
#pragma omp atomic write
      failed = true;
      continue;
    }
    out[ur] = lower_hull_at(xs, ys.subspan(ur * xs.size(), xs.size()), x);
  }
  if (failed) throw Error(ErrorKind::grid_coverage, "envelope evaluated outside its grid");
  return out;
}

}  // namespace omp

void set_max_threads(int threads) {
  if (threads >= 1) omp_set_num_threads(threads);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace motbound::kernels
