#include "motbound/hedge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "motbound/error.hpp"
#include "motbound/kernels.hpp"

namespace motbound {

std::string_view to_string(HedgeSense sense) { return sense == HedgeSense::sub ? "sub" : "super"; }

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::buy: return "BUY";
    case VerdictKind::sell: return "SELL";
    case VerdictKind::no_arb: return "NO_ARB";
  }
  return "NO_ARB";
}

namespace {

std::size_t nearest(const std::vector<double>& g, double x) {
  auto it = std::lower_bound(g.begin(), g.end(), x);
  if (it == g.begin()) return 0;
  if (it == g.end()) return g.size() - 1;
  std::size_t hi = static_cast<std::size_t>(it - g.begin());
  return (x - g[hi - 1] <= g[hi] - x) ? hi - 1 : hi;
}

}  // namespace

double DeltaTable::operator()(std::span<const double> history) const {
  if (history.size() != grids.size()) {
    throw Error(ErrorKind::dimension_mismatch, "delta history length does not match its table");
  }
  std::size_t flat = 0;
  for (std::size_t d = 0; d < grids.size(); ++d) flat = flat * grids[d].size() + nearest(grids[d], history[d]);
  return values[flat];
}

double DeltaTable::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double SemiStaticHedge::operator()(std::span<const double> s) const {
  if (s.size() != statics.size()) {
    std::ostringstream os;
    os << "hedge on " << statics.size() << " dates evaluated at " << s.size() << " coordinates";
    throw Error(ErrorKind::dimension_mismatch, os.str());
  }
  double v = cash;
  for (std::size_t i = 0; i < s.size(); ++i) v += statics[i](s[i]);
  for (std::size_t j = 0; j < deltas.size(); ++j) v += deltas[j](s.first(j + 1)) * (s[j + 1] - s[j]);
  return v;
}

double price(const SemiStaticHedge& hedge, const MarginalSystem& system) {
  if (hedge.dates() != system.dates()) {
    throw Error(ErrorKind::dimension_mismatch, "hedge and marginals have different date counts");
  }
  double p = hedge.cash;
  for (std::size_t i = 0; i < system.dates(); ++i) {
    const auto& mu = system[i];
    for (std::size_t k = 0; k < mu.size(); ++k) p += mu.weights()[k] * hedge.statics[i](mu.points()[k]);
  }
  return p;
}

double CallPortfolio::value(std::size_t date, double x) const {
  double v = cash;
  if (date < forwards.size()) v += forwards[date] * x;
  for (const auto& leg : legs) {
    if (leg.date == date) v += leg.quantity * std::max(x - leg.strike, 0.0);
  }
  return v;
}

CallPortfolio to_call_portfolio(const PiecewiseLinear& u, std::size_t date) {
  CallPortfolio p;
  p.forwards.assign(date + 1, 0.0);
  auto k = u.knots();
  auto v = u.values();
  if (k.empty()) return p;
  double slope = u.left_slope();
  p.forwards[date] = slope;
  p.cash = v[0] - slope * k[0];
  for (std::size_t i = 0; i < k.size(); ++i) {
    double next = i + 1 < k.size() ? (v[i + 1] - v[i]) / (k[i + 1] - k[i]) : u.right_slope();
    double q = next - slope;
    if (q != 0.0) p.legs.push_back({date, k[i], q});
    slope = next;
  }
  return p;
}

CallPortfolio to_call_portfolio(const SemiStaticHedge& hedge) {
  CallPortfolio p;
  p.cash = hedge.cash;
  p.forwards.assign(hedge.dates(), 0.0);
  for (std::size_t i = 0; i < hedge.dates(); ++i) {
    auto one = to_call_portfolio(hedge.statics[i], i);
    p.cash += one.cash;
    p.forwards[i] = one.forwards[i];
    p.legs.insert(p.legs.end(), one.legs.begin(), one.legs.end());
  }
  return p;
}

std::vector<double> refine(std::span<const double> points) {
  std::vector<double> out;
  out.reserve(points.size() * 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) out.push_back(0.5 * (points[i - 1] + points[i]));
    out.push_back(points[i]);
  }
  return out;
}

std::vector<std::vector<double>> verification_grids(const MarginalSystem& system) {
  std::vector<std::vector<double>> grids;
  for (std::size_t i = 0; i < system.dates(); ++i) {
    auto pts = system[i].points();
    if (i + 1 == system.dates()) {
      grids.push_back(refine(pts));
    } else {
      grids.emplace_back(pts.begin(), pts.end());
    }
  }
  return grids;
}

VerificationReport verify(const SemiStaticHedge& hedge, const Payoff& payoff,
                          const std::vector<std::vector<double>>& grids, double tol) {
  const std::size_t n = grids.size();
  if (hedge.dates() != n || static_cast<std::size_t>(payoff.dates()) != n) {
    throw Error(ErrorKind::dimension_mismatch, "hedge, payoff and grids must share the date count");
  }
  const double sign = hedge.sense == HedgeSense::sub ? 1.0 : -1.0;
  VerificationReport rep;
  rep.tolerance = tol;
  for (const auto& g : grids) rep.grid_sizes.push_back(g.size());

  auto gap = [&](std::span<const double> s) { return sign * (hedge(s) - payoff.evaluate(s)); };
  auto worst = kernels::omp::grid_max(grids, gap);
  rep.max_violation = worst.value;
  rep.worst_cell.resize(n);
  kernels::cell_coordinates(grids, worst.index, rep.worst_cell);
  rep.valid = rep.max_violation <= tol;

  double max_delta = 0.0;
  for (const auto& d : hedge.deltas) max_delta = std::max(max_delta, d.max_abs());
  for (const auto& u : hedge.statics) {
    rep.max_wing_slope = std::max({rep.max_wing_slope, std::abs(u.left_slope()), std::abs(u.right_slope())});
  }

  // Along the last coordinate Psi - Phi is linear between u_n knots and
  // payoff kinks once the history is fixed.
  std::vector<std::vector<double>> prefix_grids(grids.begin(), grids.end() - 1);
  const std::size_t histories = n > 1 ? kernels::cell_count(prefix_grids) : 1;
  const auto& last = grids.back();
  const double span = last.back() - last.front();
  std::vector<double> s(n);
  double payoff_tail = 0.0;
  rep.continuum_checked = true;
  rep.continuum_worst.assign(n, 0.0);
  rep.continuum_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t h = 0; h < histories && rep.continuum_checked; ++h) {
    if (n > 1) kernels::cell_coordinates(prefix_grids, h, std::span<double>(s.data(), n - 1));
    auto kinks = payoff.last_coordinate_kinks(std::span<const double>(s.data(), n - 1));
    if (!kinks) {
      rep.continuum_checked = false;
      break;
    }
    std::vector<double> pts(hedge.statics.back().knots().begin(), hedge.statics.back().knots().end());
    pts.insert(pts.end(), kinks->begin(), kinks->end());
    pts.push_back(0.0);
    pts.push_back(last.front());
    pts.push_back(last.back());
    std::sort(pts.begin(), pts.end());
    for (double x : pts) {
      s[n - 1] = x;
      double g = gap(s);
      if (g > rep.continuum_violation) {
        rep.continuum_violation = g;
        rep.continuum_worst = s;
      }
    }
    const double step = 1.0 + span;
    for (int side : {-1, 1}) {
      double edge = side > 0 ? pts.back() : pts.front();
      s[n - 1] = edge;
      double g0 = gap(s);
      double p0 = payoff.evaluate(s);
      s[n - 1] = edge + side * step;
      double g1 = gap(s);
      double p1 = payoff.evaluate(s);
      rep.tail_slope_violation = std::max(rep.tail_slope_violation, (g1 - g0) / step);
      payoff_tail = std::max(payoff_tail, std::abs(p1 - p0) / step);
    }
  }
  if (rep.continuum_checked) {
    rep.continuum_valid = rep.continuum_violation <= tol && rep.tail_slope_violation <= tol;
    rep.wing_slope_bound = payoff.growth_constant() + max_delta + payoff_tail;
    rep.wing_slopes_ok = rep.max_wing_slope <= rep.wing_slope_bound + 1e-9;
  } else {
    rep.continuum_violation = 0.0;
    rep.continuum_worst.clear();
  }
  return rep;
}

double slackness(const SemiStaticHedge& hedge, const Coupling& coupling, const Payoff& payoff) {
  double worst = 0.0;
  std::vector<double> s(coupling.dates());
  for (std::size_t k = 0; k < coupling.cells.size(); ++k) {
    if (coupling.masses[k] <= 1e-12) continue;
    kernels::cell_coordinates(coupling.grids, coupling.cells[k], s);
    worst = std::max(worst, std::abs(payoff.evaluate(s) - hedge(s)));
  }
  return worst;
}

SemiStaticHedge transfer_affine(const SemiStaticHedge& hedge, std::size_t j, double beta) {
  if (j >= hedge.deltas.size()) throw Error(ErrorKind::dimension_mismatch, "no such delta");
  SemiStaticHedge out = hedge;
  for (double& v : out.deltas[j].values) v += beta;
  out.statics[j] = out.statics[j].plus_affine(0.0, beta);
  out.statics[j + 1] = out.statics[j + 1].plus_affine(0.0, -beta);
  return out;
}

Verdict check_arbitrage(double quoted, double lower, double upper, double tol) {
  if (!std::isfinite(quoted)) throw Error(ErrorKind::invalid_input, "quoted price must be finite");
  if (tol < 0.0) tol = 1e-6 * (1.0 + std::abs(quoted));
  Verdict v;
  v.quoted = quoted;
  v.lower = lower;
  v.upper = upper;
  std::ostringstream os;
  os.precision(12);
  if (quoted < lower - tol) {
    v.kind = VerdictKind::buy;
    v.edge = lower - quoted;
    os << "buy the claim at " << quoted << " and sell the sub-hedge worth " << lower;
  } else if (quoted > upper + tol) {
    v.kind = VerdictKind::sell;
    v.edge = quoted - upper;
    os << "sell the claim at " << quoted << " and buy the super-hedge costing " << upper;
  } else {
    os << "quote lies within [" << lower << ", " << upper << "]";
  }
  v.description = os.str();
  return v;
}

}  // namespace motbound
