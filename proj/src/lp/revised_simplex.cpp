#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "motbound/error.hpp"
#include "motbound/lp.hpp"

namespace motbound {

namespace {

// Dense LU with partial pivoting: P B = L U, unit lower L.
class DenseLu {
 public:
  bool factor(std::vector<double> a, std::size_t m) {
    m_ = m;
    lu_ = std::move(a);
    perm_.resize(m);
    std::iota(perm_.begin(), perm_.end(), 0);
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t p = k;
      double best = std::abs(lu_[k * m + k]);
      for (std::size_t i = k + 1; i < m; ++i) {
        double v = std::abs(lu_[i * m + k]);
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (best < 1e-13) return false;
      if (p != k) {
        std::swap_ranges(lu_.begin() + static_cast<std::ptrdiff_t>(k * m),
                         lu_.begin() + static_cast<std::ptrdiff_t>((k + 1) * m),
                         lu_.begin() + static_cast<std::ptrdiff_t>(p * m));
        std::swap(perm_[k], perm_[p]);
      }
      const double inv = 1.0 / lu_[k * m + k];
      const double* rowk = &lu_[k * m];
      for (std::size_t i = k + 1; i < m; ++i) {
        double* rowi = &lu_[i * m];
        double f = rowi[k];
        if (f == 0.0) continue;
        f *= inv;
        rowi[k] = f;
        for (std::size_t j = k + 1; j < m; ++j) rowi[j] -= f * rowk[j];
      }
    }
    return true;
  }

  // B x = r
  void solve(std::vector<double>& r) const {
    std::vector<double> x(m_);
    for (std::size_t i = 0; i < m_; ++i) x[i] = r[perm_[i]];
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = &lu_[i * m_];
      double s = x[i];
      for (std::size_t j = 0; j < i; ++j) s -= row[j] * x[j];
      x[i] = s;
    }
    for (std::size_t i = m_; i-- > 0;) {
      const double* row = &lu_[i * m_];
      double s = x[i];
      for (std::size_t j = i + 1; j < m_; ++j) s -= row[j] * x[j];
      x[i] = s / row[i];
    }
    r.swap(x);
  }

  // B^T z = r
  void solve_transpose(std::vector<double>& r) const {
    std::vector<double> w(r);
    // U^T w' = r (column sweep keeps row-major access)
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = &lu_[i * m_];
      w[i] /= row[i];
      const double wi = w[i];
      if (wi == 0.0) continue;
      for (std::size_t j = i + 1; j < m_; ++j) w[j] -= row[j] * wi;
    }
    // L^T v = w'
    for (std::size_t i = m_; i-- > 0;) {
      const double* row = &lu_[i * m_];
      const double wi = w[i];
      if (wi == 0.0) continue;
      for (std::size_t j = 0; j < i; ++j) w[j] -= row[j] * wi;
    }
    for (std::size_t i = 0; i < m_; ++i) r[perm_[i]] = w[i];
  }

 private:
  std::size_t m_ = 0;
  std::vector<double> lu_;
  std::vector<std::size_t> perm_;
};

struct Eta {
  std::size_t row = 0;
  double pivot = 1.0;
  std::vector<std::pair<std::size_t, double>> others;  // alpha_i, i != row
};

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const SolverOptions& options)
      : lp_(lp), opt_(options), a_(lp.to_csc()), m_(lp.rows()), n_(lp.cols()) {
    b_ = lp.rhs;
    row_sign_.assign(m_, 1.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (b_[i] < 0.0) {
        row_sign_[i] = -1.0;
        b_[i] = -b_[i];
      }
    }
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t k = a_.start[j]; k < a_.start[j + 1]; ++k) {
        a_.value[k] *= row_sign_[a_.index[k]];
      }
    }
    cost_.assign(n_ + m_, 0.0);
    const double flip = lp.sense == Sense::maximize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = flip * lp.cost[j];
  }

  LpSolution run() {
    LpSolution out;
    head_.resize(m_);
    position_.assign(n_ + m_, kNonbasic);
    for (std::size_t i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      position_[n_ + i] = i;
    }
    refactor();

    // Phase I: minimize the sum of artificials.
    std::vector<double> phase_one(n_ + m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) phase_one[n_ + i] = 1.0;
    LpStatus status = iterate(phase_one);
    out.phase_one_iterations = iterations_;
    if (status == LpStatus::iteration_limit) return finish(out, status);

    double infeasibility = 0.0;
    double bnorm = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      bnorm = std::max(bnorm, b_[i]);
      if (head_[i] >= n_) infeasibility += std::max(x_basic_[i], 0.0);
    }
    if (infeasibility > opt_.feasibility_tol * (1.0 + bnorm)) return finish(out, LpStatus::infeasible);

    out.redundant_rows = drive_out_artificials();

    status = iterate(cost_);
    return finish(out, status);
  }

 private:
  static constexpr std::size_t kNonbasic = std::numeric_limits<std::size_t>::max();

  void column(std::size_t j, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (j >= n_) {
      out[j - n_] = 1.0;
      return;
    }
    for (std::size_t k = a_.start[j]; k < a_.start[j + 1]; ++k) out[a_.index[k]] = a_.value[k];
  }

  void refactor() {
    std::vector<double> dense(m_ * m_, 0.0);
    std::vector<double> col(m_);
    for (std::size_t p = 0; p < m_; ++p) {
      column(head_[p], col);
      for (std::size_t i = 0; i < m_; ++i) dense[i * m_ + p] = col[i];
    }
    if (!lu_.factor(std::move(dense), m_)) {
      throw Error(ErrorKind::degenerate_dual, "basis became numerically singular");
    }
    etas_.clear();
    x_basic_ = b_;
    lu_.solve(x_basic_);
  }

  void ftran(std::vector<double>& r) const {
    lu_.solve(r);
    for (const auto& e : etas_) {
      double xr = r[e.row];
      if (xr == 0.0) continue;
      double t = xr / e.pivot;
      r[e.row] = t;
      for (const auto& [i, alpha] : e.others) r[i] -= alpha * t;
    }
  }

  void btran(std::vector<double>& r) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = r[it->row];
      for (const auto& [i, alpha] : it->others) s -= r[i] * alpha;
      r[it->row] = s / it->pivot;
    }
    lu_.solve_transpose(r);
  }

  void pivot(std::size_t r, std::size_t q, const std::vector<double>& alpha, double theta) {
    for (std::size_t i = 0; i < m_; ++i) x_basic_[i] -= theta * alpha[i];
    x_basic_[r] = theta;
    position_[head_[r]] = kNonbasic;
    head_[r] = q;
    position_[q] = r;

    Eta e;
    e.row = r;
    e.pivot = alpha[r];
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r && alpha[i] != 0.0) e.others.emplace_back(i, alpha[i]);
    }
    etas_.push_back(std::move(e));
    if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) refactor();
  }

  LpStatus iterate(const std::vector<double>& cost) {
    std::vector<double> y(m_);
    std::vector<double> d(n_);
    std::vector<double> alpha(m_);
    int stalled = 0;
    bool bland = opt_.pricing == Pricing::bland;

    for (;;) {
      if (iterations_ >= opt_.iteration_limit) return LpStatus::iteration_limit;

      for (std::size_t i = 0; i < m_; ++i) y[i] = cost[head_[i]];
      btran(y);
      kernels::omp::reduced_costs(a_, std::span<const double>(cost.data(), n_), y, d);

      std::size_t q = kNonbasic;
      double best = -opt_.optimality_tol;
      for (std::size_t j = 0; j < n_; ++j) {
        if (position_[j] != kNonbasic) continue;
        if (d[j] < best) {
          q = j;
          if (bland) break;
          best = d[j];
        }
      }
      if (q == kNonbasic) return LpStatus::optimal;

      column(q, alpha);
      ftran(alpha);

      // Ratio test. Basic artificials are held at zero from both sides.
      double theta = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        bool artificial = head_[i] >= n_;
        if (alpha[i] > opt_.pivot_tol) {
          theta = std::min(theta, std::max(x_basic_[i], 0.0) / alpha[i]);
        } else if (artificial && alpha[i] < -opt_.pivot_tol && cost_is_phase_two(cost)) {
          theta = 0.0;
        }
      }
      if (!std::isfinite(theta)) return LpStatus::unbounded;

      const double tie = theta + 1e-12 * (1.0 + theta);
      std::size_t r = kNonbasic;
      for (std::size_t i = 0; i < m_; ++i) {
        bool artificial = head_[i] >= n_;
        double a = alpha[i];
        double ratio;
        if (a > opt_.pivot_tol) {
          ratio = std::max(x_basic_[i], 0.0) / a;
        } else if (artificial && a < -opt_.pivot_tol && cost_is_phase_two(cost)) {
          ratio = 0.0;
          a = -a;
        } else {
          continue;
        }
        if (ratio > tie) continue;
        if (r == kNonbasic) {
          r = i;
          continue;
        }
        if (bland) {
          if (head_[i] < head_[r]) r = i;
        } else {
          double ar = std::abs(alpha[r]);
          if (a > ar || (a == ar && head_[i] < head_[r])) r = i;
        }
      }
      double step = std::max(x_basic_[r], 0.0) / alpha[r];
      if (head_[r] >= n_ && alpha[r] < 0.0) step = 0.0;

      ++iterations_;
      if (bland) ++bland_iterations_;
      bool degenerate = std::abs(step * d[q]) <= 1e-12;
      if (degenerate) {
        if (++stalled >= opt_.stall_limit) bland = true;
      } else {
        stalled = 0;
        if (opt_.pricing == Pricing::dantzig) bland = false;
      }
      pivot(r, q, alpha, step);
    }
  }

  bool cost_is_phase_two(const std::vector<double>& cost) const { return &cost == &cost_; }

  // Pivots zero-level artificials out of the basis where possible; the rest
  // sit on redundant rows.
  std::size_t drive_out_artificials() {
    std::size_t redundant = 0;
    std::vector<double> rho(m_);
    std::vector<double> alpha(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      if (head_[r] < n_) continue;
      std::fill(rho.begin(), rho.end(), 0.0);
      rho[r] = 1.0;
      btran(rho);
      std::size_t q = kNonbasic;
      double best = 1e-7;
      for (std::size_t j = 0; j < n_; ++j) {
        if (position_[j] != kNonbasic) continue;
        double v = 0.0;
        for (std::size_t k = a_.start[j]; k < a_.start[j + 1]; ++k) v += a_.value[k] * rho[a_.index[k]];
        if (std::abs(v) > best) {
          best = std::abs(v);
          q = j;
        }
      }
      if (q == kNonbasic) {
        ++redundant;
        continue;
      }
      column(q, alpha);
      ftran(alpha);
      pivot(r, q, alpha, x_basic_[r] / alpha[r]);
    }
    return redundant;
  }

  LpSolution finish(LpSolution& out, LpStatus status) {
    out.status = status;
    out.iterations = iterations_;
    out.bland_iterations = bland_iterations_;
    if (status != LpStatus::optimal) return out;

    refactor();
    out.primal.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (head_[i] < n_) out.primal[head_[i]] = std::max(x_basic_[i], 0.0);
    }
    std::vector<double> y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = cost_[head_[i]];
    btran(y);
    const double flip = lp_.sense == Sense::maximize ? -1.0 : 1.0;
    out.dual.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) out.dual[i] = flip * row_sign_[i] * y[i];

    out.reduced_costs.assign(n_, 0.0);
    std::vector<double> aty(n_, 0.0);
    for (const auto& t : lp_.triples) aty[t.col] += t.value * out.dual[t.row];
    out.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      out.reduced_costs[j] = lp_.cost[j] - aty[j];
      out.objective += lp_.cost[j] * out.primal[j];
    }
    out.dual_objective = 0.0;
    for (std::size_t i = 0; i < m_; ++i) out.dual_objective += lp_.rhs[i] * out.dual[i];
    return out;
  }

  const LinearProgram& lp_;
  SolverOptions opt_;
  kernels::CscMatrix a_;
  std::size_t m_;
  std::size_t n_;
  std::vector<double> b_;
  std::vector<double> row_sign_;
  std::vector<double> cost_;

  std::vector<std::size_t> head_;
  std::vector<std::size_t> position_;
  std::vector<double> x_basic_;
  DenseLu lu_;
  std::vector<Eta> etas_;
  long iterations_ = 0;
  long bland_iterations_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolverOptions& options) {
  lp.validate();
  RevisedSimplex simplex(lp, options);
  return simplex.run();
}

}  // namespace motbound
