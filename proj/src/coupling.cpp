#include "motbound/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "motbound/kernels.hpp"
#include "motbound/payoff.hpp"

namespace motbound {

double Coupling::total_mass() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

std::vector<double> Coupling::coordinates(std::size_t k) const {
  std::vector<double> s(grids.size());
  kernels::cell_coordinates(grids, cells[k], s);
  return s;
}

double Coupling::expectation(const Payoff& payoff) const {
  double e = 0.0;
  std::vector<double> s(grids.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    kernels::cell_coordinates(grids, cells[k], s);
    e += masses[k] * payoff.evaluate(s);
  }
  return e;
}

namespace {

std::size_t stride_after(const std::vector<std::vector<double>>& grids, std::size_t date) {
  std::size_t s = 1;
  for (std::size_t d = date + 1; d < grids.size(); ++d) s *= grids[d].size();
  return s;
}

}  // namespace

std::vector<double> Coupling::marginal(std::size_t date) const {
  std::vector<double> out(grids[date].size(), 0.0);
  const std::size_t stride = stride_after(grids, date);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    out[(cells[k] / stride) % grids[date].size()] += masses[k];
  }
  return out;
}

double marginal_residual(const Coupling& coupling, const MarginalSystem& system) {
  double worst = 0.0;
  for (std::size_t d = 0; d < coupling.dates() && d < system.dates(); ++d) {
    auto got = coupling.marginal(d);
    const auto& g = coupling.grids[d];
    const auto& mu = system[d];
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(got[i] - mu.weight_at(g[i])));
    // atoms missing from the grid
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (!std::binary_search(g.begin(), g.end(), mu.points()[i])) {
        worst = std::max(worst, mu.weights()[i]);
      }
    }
  }
  return worst;
}

double martingale_residual(const Coupling& coupling) {
  double worst = 0.0;
  const auto& grids = coupling.grids;
  std::vector<double> s(grids.size());
  for (std::size_t j = 0; j + 1 < grids.size(); ++j) {
    const std::size_t stride = stride_after(grids, j);
    std::map<std::size_t, double> sums;
    for (std::size_t k = 0; k < coupling.cells.size(); ++k) {
      kernels::cell_coordinates(grids, coupling.cells[k], s);
      sums[coupling.cells[k] / stride] += coupling.masses[k] * (s[j + 1] - s[j]);
    }
    for (const auto& [h, v] : sums) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

Coupling monotone_coupling(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2, bool antitone) {
  Coupling c;
  c.grids = {std::vector<double>(mu1.points().begin(), mu1.points().end()),
             std::vector<double>(mu2.points().begin(), mu2.points().end())};
  const std::size_t m1 = mu1.size();
  const std::size_t m2 = mu2.size();
  std::vector<double> a(mu1.weights().begin(), mu1.weights().end());
  std::vector<double> b(mu2.weights().begin(), mu2.weights().end());
  std::size_t i = 0;
  std::size_t j = 0;
  std::map<std::size_t, double> cells;
  while (i < m1 && j < m2) {
    const std::size_t jj = antitone ? m2 - 1 - j : j;
    double q = std::min(a[i], b[jj]);
    if (q > 0.0) cells[i * m2 + jj] += q;
    a[i] -= q;
    b[jj] -= q;
    if (a[i] <= 1e-15) ++i;
    if (b[jj] <= 1e-15) ++j;
  }
  for (const auto& [cell, q] : cells) {
    c.cells.push_back(cell);
    c.masses.push_back(q);
  }
  return c;
}

}  // namespace motbound
