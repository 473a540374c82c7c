#include <algorithm>
#include <cmath>
#include <sstream>

#include "motbound/error.hpp"
#include "motbound/lp.hpp"

namespace motbound {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

void LinearProgram::validate() const {
  if (cost.empty() || rhs.empty()) {
    throw Error(ErrorKind::invalid_input, "LP needs at least one variable and one constraint");
  }
  std::vector<std::pair<std::size_t, std::size_t>> keys;
  keys.reserve(triples.size());
  for (const auto& t : triples) {
    if (t.row >= rows() || t.col >= cols()) {
      std::ostringstream os;
      os << "triple (" << t.row << ", " << t.col << ") out of range";
      throw Error(ErrorKind::invalid_input, os.str());
    }
    if (!std::isfinite(t.value)) throw Error(ErrorKind::invalid_input, "non-finite coefficient");
    keys.emplace_back(t.col, t.row);
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw Error(ErrorKind::invalid_input, "duplicate (row, col) triple");
  }
  for (double c : cost) {
    if (!std::isfinite(c)) throw Error(ErrorKind::invalid_input, "non-finite cost");
  }
  for (double b : rhs) {
    if (!std::isfinite(b)) throw Error(ErrorKind::invalid_input, "non-finite right-hand side");
  }
}

kernels::CscMatrix LinearProgram::to_csc() const {
  kernels::CscMatrix a;
  a.rows = rows();
  a.cols = cols();
  a.start.assign(a.cols + 1, 0);
  for (const auto& t : triples) {
    if (t.value != 0.0) ++a.start[t.col + 1];
  }
  for (std::size_t j = 0; j < a.cols; ++j) a.start[j + 1] += a.start[j];
  a.index.resize(a.start.back());
  a.value.resize(a.start.back());
  std::vector<std::size_t> fill(a.start.begin(), a.start.end() - 1);
  for (const auto& t : triples) {
    if (t.value == 0.0) continue;
    std::size_t k = fill[t.col]++;
    a.index[k] = t.row;
    a.value[k] = t.value;
  }
  // sort each column by row for deterministic accumulation order
  for (std::size_t j = 0; j < a.cols; ++j) {
    std::vector<std::pair<std::size_t, double>> col;
    for (std::size_t k = a.start[j]; k < a.start[j + 1]; ++k) col.emplace_back(a.index[k], a.value[k]);
    std::sort(col.begin(), col.end());
    for (std::size_t k = a.start[j]; k < a.start[j + 1]; ++k) {
      a.index[k] = col[k - a.start[j]].first;
      a.value[k] = col[k - a.start[j]].second;
    }
  }
  return a;
}

LpCheck check_solution(const LinearProgram& lp, const LpSolution& s) {
  LpCheck check;
  if (s.primal.size() != lp.cols() || s.dual.size() != lp.rows()) return check;
  std::vector<double> ax(lp.rows(), 0.0);
  std::vector<double> aty(lp.cols(), 0.0);
  for (const auto& t : lp.triples) {
    ax[t.row] += t.value * s.primal[t.col];
    aty[t.col] += t.value * s.dual[t.row];
  }
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < lp.rows(); ++i) {
    check.primal_residual = std::max(check.primal_residual, std::abs(ax[i] - lp.rhs[i]));
    dual_obj += lp.rhs[i] * s.dual[i];
  }
  check.min_primal = s.primal.empty() ? 0.0 : s.primal.front();
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    check.min_primal = std::min(check.min_primal, s.primal[j]);
    primal_obj += lp.cost[j] * s.primal[j];
    double d = lp.cost[j] - aty[j];
    double wrong = lp.sense == Sense::minimize ? -d : d;
    check.worst_reduced_cost = std::max(check.worst_reduced_cost, wrong);
    check.slackness = std::max(check.slackness, std::abs(s.primal[j] * d));
  }
  check.duality_gap = std::abs(primal_obj - dual_obj);
  return check;
}

}  // namespace motbound
