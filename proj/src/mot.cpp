#include "motbound/mot.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <random>
#include <sstream>

#include "motbound/error.hpp"
#include "motbound/kernels.hpp"

namespace motbound {

std::string_view to_string(BoundSense sense) { return sense == BoundSense::lower ? "lower" : "upper"; }

BoundSense bound_sense_from_string(std::string_view name) {
  if (name == "lower" || name == "min") return BoundSense::lower;
  if (name == "upper" || name == "max") return BoundSense::upper;
  throw Error(ErrorKind::invalid_input, "sense must be lower or upper, got '" + std::string(name) + "'");
}

namespace {

std::vector<double> atoms_of(const DiscreteMeasure& mu) {
  return std::vector<double>(mu.points().begin(), mu.points().end());
}

std::size_t stride_after(const std::vector<std::vector<double>>& grids, std::size_t date) {
  std::size_t s = 1;
  for (std::size_t d = date + 1; d < grids.size(); ++d) s *= grids[d].size();
  return s;
}

std::size_t prefix_count(const std::vector<std::vector<double>>& grids, std::size_t last) {
  std::size_t c = 1;
  for (std::size_t d = 0; d <= last; ++d) c *= grids[d].size();
  return c;
}

void check_problem(const MotProblem& p) {
  if (p.system.dates() == 0) throw Error(ErrorKind::bad_spec, "no marginals");
  if (static_cast<std::size_t>(p.payoff.dates()) != p.system.dates()) {
    std::ostringstream os;
    os << "payoff has " << p.payoff.dates() << " dates but " << p.system.dates() << " marginals were given";
    throw Error(ErrorKind::dimension_mismatch, os.str());
  }
  if (!p.system.admissible()) {
    const auto& rep = p.system.order_report();
    std::ostringstream os;
    os.precision(12);
    os << "marginals are not in convex order";
    if (!rep.means_equal) os << "; means differ by " << rep.max_mean_gap;
    for (const auto& pair : rep.pairs) {
      if (pair.worst_violation > kOrderTolerance) {
        os << "; dates " << pair.date + 1 << "-" << pair.date + 2 << " violate by " << pair.worst_violation
           << " at strike " << pair.worst_strike;
      }
    }
    throw Error(ErrorKind::not_admissible, os.str());
  }
}

Coupling coupling_from(const MotLp& m, const std::vector<double>& primal) {
  Coupling c;
  c.grids = m.grids;
  for (std::size_t k = 0; k < primal.size(); ++k) {
    if (primal[k] > 0.0) {
      c.cells.push_back(k);
      c.masses.push_back(primal[k]);
    }
  }
  return c;
}

void throw_status(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return;
    case LpStatus::infeasible:
      throw Error(ErrorKind::infeasible,
                  "no martingale coupling on the grid; the discretization broke convex order, re-discretize");
    case LpStatus::unbounded: throw Error(ErrorKind::unbounded, "LP is unbounded");
    case LpStatus::iteration_limit: throw Error(ErrorKind::iteration_limit, "simplex iteration limit reached");
  }
}

// Statics after the first vanish at their heaviest atom; cash absorbs it.
void normalize_constants(SemiStaticHedge& h, const MarginalSystem& system) {
  for (std::size_t i = 1; i < h.dates(); ++i) {
    const auto& mu = system[i];
    double c = h.statics[i](mu.points()[mu.heaviest_atom()]);
    h.statics[i] = h.statics[i].plus_affine(-c, 0.0);
    h.cash += c;
  }
}

HedgeSense hedge_sense(BoundSense s) { return s == BoundSense::lower ? HedgeSense::sub : HedgeSense::super; }

void fill_diagnostics(MotResult& r, const MotProblem& p, const MotOptions& opt) {
  auto& d = r.diagnostics;
  d.max_marginal_residual = marginal_residual(r.coupling, p.system);
  d.max_martingale_residual = martingale_residual(r.coupling);
  d.max_slackness_violation = slackness(r.hedge, r.coupling, p.payoff);
  d.hedge_price = price(r.hedge, p.system);
  d.verification = verify(r.hedge, p.payoff, verification_grids(p.system), opt.verify_tolerance);
}

bool hedge_consistent(const MotResult& r) {
  const double v = r.value;
  return std::abs(r.diagnostics.hedge_price - v) <= 1e-7 * (1.0 + std::abs(v)) && r.diagnostics.verification.valid;
}

}  // namespace

MotLp build_lp(const MotProblem& problem, const MotOptions& options) {
  check_problem(problem);
  const auto& sys = problem.system;
  const std::size_t n = sys.dates();
  MotLp m;
  for (std::size_t i = 0; i < n; ++i) m.grids.push_back(atoms_of(sys[i]));
  m.lp.sense = problem.sense == BoundSense::lower ? Sense::minimize : Sense::maximize;
  m.lp.cost = tabulate(problem.payoff, m.grids);

  std::size_t row = 0;
  m.marginal_rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mu = sys[i];
    m.marginal_rows[i].assign(mu.size(), kNoRow);
    const std::size_t dropped = i == 0 ? kNoRow : mu.heaviest_atom();
    for (std::size_t k = 0; k < mu.size(); ++k) {
      if (k == dropped) continue;
      m.marginal_rows[i][k] = row++;
      m.lp.rhs.push_back(mu.weights()[k]);
    }
  }

  // block index of each atom of dates i and i+1 under the pair decomposition
  std::vector<std::vector<int>> block_here(n), block_next(n);
  const bool prune = options.prune_histories && n >= 3;
  if (prune) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      auto blocks = detect_barriers(sys[i], sys[i + 1]);
      auto levels = barrier_levels(blocks);
      auto index = [&](double x) {
        return static_cast<int>(std::lower_bound(levels.begin(), levels.end(), x) - levels.begin());
      };
      for (double x : m.grids[i]) block_here[i].push_back(index(x));
      for (double x : m.grids[i + 1]) block_next[i].push_back(index(x));
    }
  }

  m.martingale_rows.resize(n > 0 ? n - 1 : 0);
  std::vector<std::size_t> idx(n);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::size_t count = prefix_count(m.grids, j);
    m.martingale_rows[j].assign(count, kNoRow);
    const bool flat_next = m.grids[j + 1].size() == 1;
    for (std::size_t h = 0; h < count; ++h) {
      std::size_t rem = h;
      for (std::size_t d = j + 1; d-- > 0;) {
        idx[d] = rem % m.grids[d].size();
        rem /= m.grids[d].size();
      }
      if (flat_next && m.grids[j + 1][0] == m.grids[j][idx[j]]) continue;
      bool crossed = false;
      for (std::size_t i = 0; prune && i < j && !crossed; ++i) {
        crossed = block_here[i][idx[i]] != block_next[i][idx[i + 1]];
      }
      if (crossed) {
        ++m.pruned_histories;
        continue;
      }
      m.martingale_rows[j][h] = row++;
      m.lp.rhs.push_back(0.0);
    }
  }

  const std::size_t cells = m.lp.cost.size();
  m.lp.triples.reserve(cells * (2 * n));
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rem = c;
    for (std::size_t d = n; d-- > 0;) {
      idx[d] = rem % m.grids[d].size();
      rem /= m.grids[d].size();
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = m.marginal_rows[i][idx[i]];
      if (r != kNoRow) m.lp.triples.push_back({r, c, 1.0});
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
      std::size_t r = m.martingale_rows[j][c / stride_after(m.grids, j)];
      double step = m.grids[j + 1][idx[j + 1]] - m.grids[j][idx[j]];
      if (r != kNoRow && step != 0.0) m.lp.triples.push_back({r, c, step});
    }
  }
  return m;
}

void complete_last_static(SemiStaticHedge& hedge, const MotProblem& problem) {
  const auto& sys = problem.system;
  const std::size_t n = sys.dates();
  const bool sub = hedge.sense == HedgeSense::sub;
  std::vector<std::vector<double>> prefix;
  for (std::size_t i = 0; i + 1 < n; ++i) prefix.push_back(atoms_of(sys[i]));
  const std::size_t histories = n > 1 ? kernels::cell_count(prefix) : 1;

  auto last_atoms = sys[n - 1].points();
  std::vector<double> knots = refine(last_atoms);
  std::vector<double> s(n);
  std::vector<double> rest(histories), delta(histories, 0.0), anchor(histories, 0.0);
  for (std::size_t h = 0; h < histories; ++h) {
    if (n > 1) kernels::cell_coordinates(prefix, h, std::span<double>(s.data(), n - 1));
    double r = hedge.cash;
    for (std::size_t i = 0; i + 1 < n; ++i) r += hedge.statics[i](s[i]);
    for (std::size_t j = 0; j + 2 < n; ++j) {
      r += hedge.deltas[j](std::span<const double>(s.data(), j + 1)) * (s[j + 1] - s[j]);
    }
    rest[h] = r;
    if (n > 1) {
      delta[h] = hedge.deltas[n - 2](std::span<const double>(s.data(), n - 1));
      anchor[h] = s[n - 2];
    }
    if (auto k = problem.payoff.last_coordinate_kinks(std::span<const double>(s.data(), n - 1))) {
      for (double x : *k) {
        if (std::isfinite(x)) knots.push_back(x);
      }
    }
  }
  std::sort(knots.begin(), knots.end());
  std::vector<double> uniq;
  for (double x : knots) {
    if (uniq.empty() || x - uniq.back() > 1e-12 * (1.0 + std::abs(x))) uniq.push_back(x);
  }
  knots = std::move(uniq);

  auto g = [&](std::size_t h, double x) {
    if (n > 1) kernels::cell_coordinates(prefix, h, std::span<double>(s.data(), n - 1));
    s[n - 1] = x;
    return problem.payoff.evaluate(s) - rest[h] - delta[h] * (x - anchor[h]);
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> values(knots.size(), sub ? inf : -inf);
  double right = sub ? inf : -inf;
  double left = sub ? -inf : inf;
  const double lo = knots.front();
  const double hi = knots.back();
  for (std::size_t h = 0; h < histories; ++h) {
    for (std::size_t k = 0; k < knots.size(); ++k) {
      double v = g(h, knots[k]);
      values[k] = sub ? std::min(values[k], v) : std::max(values[k], v);
    }
    double rs = g(h, hi + 1.0) - g(h, hi);
    double ls = g(h, lo) - g(h, lo - 1.0);
    right = sub ? std::min(right, rs) : std::max(right, rs);
    left = sub ? std::max(left, ls) : std::min(left, ls);
  }
  hedge.statics[n - 1] = PiecewiseLinear(std::move(knots), std::move(values), left, right);
}

SemiStaticHedge extract_hedge(const LpSolution& solution, const MotProblem& problem, const MotLp& m) {
  const auto& sys = problem.system;
  const std::size_t n = sys.dates();
  if (solution.dual.size() != m.lp.rows()) {
    throw Error(ErrorKind::dimension_mismatch, "dual vector does not match the LP");
  }
  std::vector<std::vector<double>> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i].assign(m.grids[i].size(), 0.0);
    for (std::size_t k = 0; k < u[i].size(); ++k) {
      std::size_t r = m.marginal_rows[i][k];
      if (r != kNoRow) u[i][k] = solution.dual[r];
    }
  }
  SemiStaticHedge hedge;
  hedge.sense = hedge_sense(problem.sense);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    DeltaTable t;
    t.grids.assign(m.grids.begin(), m.grids.begin() + static_cast<long>(j) + 1);
    const std::size_t count = m.martingale_rows[j].size();
    t.values.assign(count, 0.0);
    double wsum = 0.0;
    double dsum = 0.0;
    std::vector<double> idx_w(j + 1);
    for (std::size_t h = 0; h < count; ++h) {
      std::size_t r = m.martingale_rows[j][h];
      if (r != kNoRow) t.values[h] = solution.dual[r];
      double w = 1.0;
      std::size_t rem = h;
      for (std::size_t d = j + 1; d-- > 0;) {
        w *= sys[d].weights()[rem % m.grids[d].size()];
        rem /= m.grids[d].size();
      }
      wsum += w;
      dsum += w * t.values[h];
    }
    const double beta = wsum > 0.0 ? -dsum / wsum : 0.0;
    for (double& v : t.values) v += beta;
    for (std::size_t k = 0; k < u[j].size(); ++k) u[j][k] += beta * m.grids[j][k];
    for (std::size_t k = 0; k < u[j + 1].size(); ++k) u[j + 1][k] -= beta * m.grids[j + 1][k];
    hedge.deltas.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < n; ++i) hedge.statics.push_back(PiecewiseLinear::continued(m.grids[i], u[i]));
  complete_last_static(hedge, problem);
  normalize_constants(hedge, sys);
  return hedge;
}

MotResult bound(const MotProblem& problem, const MotOptions& options) {
  MotLp m = build_lp(problem, options);
  MotOptions opt = options;
  for (int attempt = 0; attempt < 2; ++attempt) {
    LpSolution sol = solve(m.lp, opt.lp);
    throw_status(sol.status);
    MotResult r;
    r.sense = problem.sense;
    r.value = sol.objective;
    r.coupling = coupling_from(m, sol.primal);
    r.hedge = extract_hedge(sol, problem, m);
    r.diagnostics.lp_status = sol.status;
    r.diagnostics.lp_iterations = sol.iterations;
    r.diagnostics.redundant_rows = sol.redundant_rows;
    r.diagnostics.duality_gap = std::abs(sol.objective - sol.dual_objective);
    r.diagnostics.bland_retry = attempt > 0;
    fill_diagnostics(r, problem, opt);
    if (hedge_consistent(r)) return r;
    if (opt.lp.pricing == Pricing::bland) {
      std::ostringstream os;
      os.precision(12);
      os << "dual does not yield a valid hedge: price " << r.diagnostics.hedge_price << " vs value " << r.value
         << ", worst violation " << r.diagnostics.verification.max_violation;
      throw Error(ErrorKind::degenerate_dual, os.str());
    }
    opt.lp.pricing = Pricing::bland;
  }
  throw Error(ErrorKind::degenerate_dual, "dual does not yield a valid hedge");
}

namespace {

// Solves for per-block shifts c_b + beta_b x so that the glued hedge holds
// on cross-block cells. Returns false when no shift works.
bool glue(const std::vector<std::vector<double>>& raw, const std::vector<std::vector<double>>& phi,
          const std::vector<int>& block1, const std::vector<int>& block2, const std::vector<double>& x2,
          int blocks, bool sub, std::vector<double>& c, std::vector<double>& beta) {
  LinearProgram lp;
  lp.sense = Sense::minimize;
  const std::size_t free_vars = 4 * static_cast<std::size_t>(blocks - 1);
  lp.cost.assign(free_vars, 1e-3);
  auto var = [](int b, int which) { return 4 * static_cast<std::size_t>(b - 1) + static_cast<std::size_t>(which); };
  std::size_t row = 0;
  for (std::size_t a = 0; a < block1.size(); ++a) {
    for (std::size_t b = 0; b < block2.size(); ++b) {
      int k = block1[a];
      int l = block2[b];
      if (k == l) continue;
      const double sg = sub ? 1.0 : -1.0;
      std::map<std::size_t, double> coef;
      if (k > 0) {
        coef[var(k, 0)] += sg;
        coef[var(k, 1)] -= sg;
        coef[var(k, 2)] += sg * x2[b];
        coef[var(k, 3)] -= sg * x2[b];
      }
      if (l > 0) {
        coef[var(l, 0)] -= sg;
        coef[var(l, 1)] += sg;
        coef[var(l, 2)] -= sg * x2[b];
        coef[var(l, 3)] += sg * x2[b];
      }
      for (const auto& [col, v] : coef) {
        if (v != 0.0) lp.triples.push_back({row, col, v});
      }
      lp.triples.push_back({row, lp.cost.size(), 1.0});
      lp.cost.push_back(0.0);
      lp.rhs.push_back(sg * (phi[a][b] - raw[a][b]));
      ++row;
    }
  }
  c.assign(static_cast<std::size_t>(blocks), 0.0);
  beta.assign(static_cast<std::size_t>(blocks), 0.0);
  if (row == 0) return true;
  LpSolution sol;
  try {
    sol = solve(lp);
  } catch (const Error&) {
    return false;
  }
  if (!sol.optimal()) return false;
  for (int b = 1; b < blocks; ++b) {
    c[static_cast<std::size_t>(b)] = sol.primal[var(b, 0)] - sol.primal[var(b, 1)];
    beta[static_cast<std::size_t>(b)] = sol.primal[var(b, 2)] - sol.primal[var(b, 3)];
  }
  return true;
}

}  // namespace

MotResult decompose_and_solve(const MotProblem& problem, const MotOptions& options) {
  check_problem(problem);
  if (problem.system.dates() != 2) return bound(problem, options);
  const auto& mu1 = problem.system[0];
  const auto& mu2 = problem.system[1];
  auto blocks = detect_barriers(mu1, mu2);
  if (blocks.size() <= 1) return bound(problem, options);

  std::vector<Block> live;
  for (auto& b : blocks) {
    if (!b.first.empty() && !b.second.empty() && b.mass > 0.0) live.push_back(std::move(b));
  }
  const int nb = static_cast<int>(live.size());
  const std::vector<double> g1 = atoms_of(mu1);
  const std::vector<double> g2 = atoms_of(mu2);
  auto position = [](const std::vector<double>& g, double x) {
    return static_cast<std::size_t>(std::lower_bound(g.begin(), g.end(), x) - g.begin());
  };
  auto levels = barrier_levels(live);
  auto block_of = [&](double x) {
    return static_cast<int>(std::lower_bound(levels.begin(), levels.end(), x) - levels.begin());
  };

  MotResult r;
  r.sense = problem.sense;
  r.barriers = levels;
  r.coupling.grids = {g1, g2};
  std::vector<MotResult> parts;
  std::map<std::size_t, double> cells;
  for (const auto& b : live) {
    MotProblem sub{MarginalSystem({b.first, b.second}), problem.payoff, problem.sense};
    MotResult part = bound(sub, options);
    r.value += b.mass * part.value;
    r.diagnostics.lp_iterations += part.diagnostics.lp_iterations;
    r.diagnostics.redundant_rows += part.diagnostics.redundant_rows;
    r.diagnostics.duality_gap = std::max(r.diagnostics.duality_gap, part.diagnostics.duality_gap);
    const std::size_t m2b = b.second.size();
    for (std::size_t k = 0; k < part.coupling.cells.size(); ++k) {
      std::size_t c = part.coupling.cells[k];
      std::size_t i = position(g1, b.first.points()[c / m2b]);
      std::size_t j = position(g2, b.second.points()[c % m2b]);
      cells[i * g2.size() + j] += b.mass * part.coupling.masses[k];
    }
    parts.push_back(std::move(part));
  }
  for (const auto& [c, q] : cells) {
    r.coupling.cells.push_back(c);
    r.coupling.masses.push_back(q);
  }

  // raw glued hedge on every atom pair, before per-block shifts
  std::vector<int> b1(g1.size()), b2(g2.size());
  for (std::size_t a = 0; a < g1.size(); ++a) b1[a] = block_of(g1[a]);
  for (std::size_t b = 0; b < g2.size(); ++b) b2[b] = block_of(g2[b]);
  std::vector<std::vector<double>> raw(g1.size(), std::vector<double>(g2.size()));
  std::vector<std::vector<double>> phi(g1.size(), std::vector<double>(g2.size()));
  for (std::size_t a = 0; a < g1.size(); ++a) {
    const auto& hk = parts[static_cast<std::size_t>(b1[a])].hedge;
    const double one[1] = {g1[a]};
    for (std::size_t b = 0; b < g2.size(); ++b) {
      const auto& hl = parts[static_cast<std::size_t>(b2[b])].hedge;
      raw[a][b] = hk.cash + hk.statics[0](g1[a]) + hl.statics[1](g2[b]) + hk.deltas[0](one) * (g2[b] - g1[a]);
      phi[a][b] = problem.payoff(g1[a], g2[b]);
    }
  }
  std::vector<double> c, beta;
  const bool sub = problem.sense == BoundSense::lower;
  if (glue(raw, phi, b1, b2, g2, nb, sub, c, beta)) {
    SemiStaticHedge h;
    h.sense = hedge_sense(problem.sense);
    std::vector<double> u1(g1.size()), d(g1.size());
    for (std::size_t a = 0; a < g1.size(); ++a) {
      const std::size_t k = static_cast<std::size_t>(b1[a]);
      const auto& hk = parts[k].hedge;
      const double one[1] = {g1[a]};
      u1[a] = hk.cash + hk.statics[0](g1[a]) + c[k] + beta[k] * g1[a];
      d[a] = hk.deltas[0](one) + beta[k];
    }
    h.statics.push_back(PiecewiseLinear::continued(g1, u1));
    h.statics.push_back(PiecewiseLinear::continued(g2, std::vector<double>(g2.size(), 0.0)));
    h.deltas.push_back(DeltaTable{{g1}, d});
    complete_last_static(h, problem);
    normalize_constants(h, problem.system);
    r.hedge = std::move(h);
    fill_diagnostics(r, problem, options);
  }
  if (r.hedge.statics.empty() || !hedge_consistent(r)) {
    MotResult mono = bound(problem, options);
    r.hedge = mono.hedge;
    r.diagnostics.hedge_source = "monolithic";
    fill_diagnostics(r, problem, options);
  } else {
    r.diagnostics.hedge_source = "glued";
  }
  return r;
}

std::vector<SweepRow> strike_sweep(const MarginalSystem& system, const std::vector<double>& strikes,
                                   const MotOptions& options) {
  if (system.dates() != 2) throw Error(ErrorKind::dimension_mismatch, "strike sweep needs two marginals");
  std::vector<SweepRow> rows(strikes.size());
  const long count = static_cast<long>(strikes.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    row.strike = strikes[static_cast<std::size_t>(i)];
    try {
      Payoff p = Payoff::forward_start_call(row.strike);
      row.lower = bound(MotProblem{system, p, BoundSense::lower}, options).value;
      row.upper = bound(MotProblem{system, p, BoundSense::upper}, options).value;
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  return rows;
}

Coupling random_feasible_coupling(const MarginalSystem& system, std::uint64_t seed, const MotOptions& options) {
  std::vector<std::vector<double>> grids;
  for (std::size_t i = 0; i < system.dates(); ++i) grids.push_back(atoms_of(system[i]));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values(kernels::cell_count(grids));
  for (double& v : values) v = unit(rng);
  MotProblem p{system, Payoff::tabulated(grids, values), BoundSense::lower};
  MotLp m = build_lp(p, options);
  LpSolution sol = solve(m.lp, options.lp);
  throw_status(sol.status);
  return coupling_from(m, sol.primal);
}

TransportBounds transport_bounds(const MarginalSystem& system, const Payoff& payoff) {
  if (system.dates() != 2 || payoff.dates() != 2) {
    throw Error(ErrorKind::dimension_mismatch, "transport bounds need two dates");
  }
  TransportBounds t;
  t.comonotone = monotone_coupling(system[0], system[1], false).expectation(payoff);
  t.antitone = monotone_coupling(system[0], system[1], true).expectation(payoff);
  return t;
}

double DeltaIncrements::min_increment() const {
  double m = std::numeric_limits<double>::infinity();
  for (double d : increments) m = std::min(m, d);
  return m;
}

DeltaIncrements delta_increments(const SemiStaticHedge& hedge, const DiscreteMeasure& mu1) {
  if (hedge.deltas.empty()) throw Error(ErrorKind::dimension_mismatch, "hedge has no delta");
  DeltaIncrements out;
  out.atoms = atoms_of(mu1);
  for (double x : out.atoms) {
    const double one[1] = {x};
    out.deltas.push_back(hedge.deltas[0](one));
  }
  for (std::size_t i = 1; i < out.deltas.size(); ++i) out.increments.push_back(out.deltas[i] - out.deltas[i - 1]);
  return out;
}

}  // namespace motbound
