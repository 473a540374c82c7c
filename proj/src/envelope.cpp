#include "motbound/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "motbound/error.hpp"
#include "motbound/kernels.hpp"

namespace motbound {

PiecewiseLinear convex_envelope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw Error(ErrorKind::invalid_input, "envelope needs matching, non-empty point lists");
  }
  auto hull = kernels::lower_hull(xs, ys);
  std::vector<double> kx, ky;
  for (std::size_t i : hull) {
    kx.push_back(xs[i]);
    ky.push_back(ys[i]);
  }
  return PiecewiseLinear::continued(std::move(kx), std::move(ky));
}

double TabulatedU2::operator()(double x) const {
  auto it = std::lower_bound(grid.begin(), grid.end(), x);
  if (it != grid.end() && *it == x) return values[static_cast<std::size_t>(it - grid.begin())];
  if (it == grid.begin() || it == grid.end()) {
    throw Error(ErrorKind::grid_coverage, "u2 evaluated outside its grid");
  }
  std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  double t = (x - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
  return (1.0 - t) * values[hi - 1] + t * values[hi];
}

std::vector<double> envelope_grid(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2) {
  std::vector<double> g(mu2.points().begin(), mu2.points().end());
  g.insert(g.end(), mu1.points().begin(), mu1.points().end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

TabulatedU2 tabulate_u2(const PiecewiseLinear& u, const DiscreteMeasure& mu1, const DiscreteMeasure& mu2) {
  TabulatedU2 t;
  t.grid = envelope_grid(mu1, mu2);
  for (double x : t.grid) t.values.push_back(u(x));
  return t;
}

namespace {

struct Frame {
  std::vector<double> phi;  // mu1 atoms x grid, row major
  std::vector<double> at;   // mu1 atoms
  std::vector<double> w1;
  std::vector<double> w2;   // mu2 weight on each grid point
};

Frame make_frame(const TabulatedU2& u2, const Payoff& payoff, const DiscreteMeasure& mu1,
                 const DiscreteMeasure& mu2) {
  if (payoff.dates() != 2) throw Error(ErrorKind::dimension_mismatch, "envelope dual needs a two-date payoff");
  if (u2.grid.size() != u2.values.size() || u2.grid.size() < 2) {
    throw Error(ErrorKind::invalid_input, "u2 needs at least two grid points with values");
  }
  for (std::size_t i = 1; i < u2.grid.size(); ++i) {
    if (!(u2.grid[i] > u2.grid[i - 1])) throw Error(ErrorKind::invalid_input, "u2 grid must be increasing");
  }
  for (double x : mu1.points()) {
    if (x < u2.grid.front() || x > u2.grid.back()) {
      std::ostringstream os;
      os << "mu1 atom " << x << " lies outside the u2 grid [" << u2.grid.front() << ", " << u2.grid.back() << "]";
      throw Error(ErrorKind::grid_coverage, os.str());
    }
  }
  Frame f;
  f.at.assign(mu1.points().begin(), mu1.points().end());
  f.w1.assign(mu1.weights().begin(), mu1.weights().end());
  f.phi = kernels::omp::tabulate(payoff, {f.at, u2.grid});
  f.w2.assign(u2.grid.size(), 0.0);
  for (std::size_t k = 0; k < mu2.size(); ++k) {
    double x = mu2.points()[k];
    auto it = std::lower_bound(u2.grid.begin(), u2.grid.end(), x);
    if (it == u2.grid.end() || *it != x) {
      throw Error(ErrorKind::grid_coverage, "u2 grid must contain every mu2 atom");
    }
    f.w2[static_cast<std::size_t>(it - u2.grid.begin())] += mu2.weights()[k];
  }
  return f;
}

double evaluate(const Frame& f, const std::vector<double>& grid, const std::vector<double>& u) {
  const std::size_t m = grid.size();
  std::vector<double> g(f.phi.size());
  for (std::size_t r = 0; r < f.at.size(); ++r) {
    for (std::size_t k = 0; k < m; ++k) g[r * m + k] = f.phi[r * m + k] - u[k];
  }
  auto env = kernels::omp::envelopes_at(grid, g, f.at);
  double v = 0.0;
  for (std::size_t r = 0; r < f.at.size(); ++r) v += f.w1[r] * env[r];
  for (std::size_t k = 0; k < m; ++k) v += f.w2[k] * u[k];
  return v;
}

}  // namespace

double dual_value(const TabulatedU2& u2, const Payoff& payoff, const DiscreteMeasure& mu1,
                  const DiscreteMeasure& mu2) {
  Frame f = make_frame(u2, payoff, mu1, mu2);
  return evaluate(f, u2.grid, u2.values);
}

EnvelopeDual improve_u2(const TabulatedU2& start, const Payoff& payoff, const DiscreteMeasure& mu1,
                        const DiscreteMeasure& mu2, int iters) {
  Frame f = make_frame(start, payoff, mu1, mu2);
  EnvelopeDual out;
  out.u2 = start;
  auto& u = out.u2.values;
  const auto& grid = out.u2.grid;
  const std::size_t m = grid.size();
  double best = evaluate(f, grid, u);
  std::vector<double> scale(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double lo = f.phi[k];
    double hi = f.phi[k];
    for (std::size_t r = 0; r < f.at.size(); ++r) {
      lo = std::min(lo, f.phi[r * m + k]);
      hi = std::max(hi, f.phi[r * m + k]);
    }
    scale[k] = std::max({hi - lo, std::abs(hi), std::abs(lo), 1e-3});
  }
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int sweep = 0; sweep < iters; ++sweep) {
    bool moved = false;
    for (std::size_t k = 0; k < m; ++k) {
      const double centre = u[k];
      const double half = 2.0 * scale[k];
      auto at = [&](double v) {
        u[k] = v;
        return evaluate(f, grid, u);
      };
      double a = centre - half;
      double b = centre + half;
      double c = b - ratio * (b - a);
      double d = a + ratio * (b - a);
      double fc = at(c);
      double fd = at(d);
      for (int it = 0; it < 60 && b - a > 1e-12 * (1.0 + std::abs(centre)); ++it) {
        if (fc >= fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - ratio * (b - a);
          fc = at(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + ratio * (b - a);
          fd = at(d);
        }
      }
      double cand = fc >= fd ? c : d;
      double fv = std::max(fc, fd);
      if (fv > best) {
        u[k] = cand;
        moved = moved || fv > best + 1e-15;
        best = fv;
      } else {
        u[k] = centre;
      }
    }
    out.sweeps = sweep + 1;
    if (!moved) break;
  }
  out.value = best;
  for (std::size_t r = 0; r < f.at.size(); ++r) {
    std::vector<double> g(m);
    for (std::size_t k = 0; k < m; ++k) g[k] = f.phi[r * m + k] - u[k];
    out.envelopes.push_back(convex_envelope(grid, g));
  }
  return out;
}

}  // namespace motbound
