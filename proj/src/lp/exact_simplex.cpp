#include <gmpxx.h>

#include <cmath>
#include <sstream>

#include "motbound/error.hpp"
#include "motbound/lp.hpp"

namespace motbound {

namespace {

// Simplest fraction within 1e-14 relative of x (continued-fraction
// convergents), else the exact binary value of x.
mpq_class rationalize(double x) {
  if (x == 0.0) return mpq_class(0);
  mpq_class exact(x);
  const mpq_class tol(std::abs(x) * 1e-14 > 1e-300 ? std::abs(x) * 1e-14 : 1e-300);
  mpq_class rem = exact;
  // convergents h/k with h_{-2} = 0, h_{-1} = 1, k_{-2} = 1, k_{-1} = 0
  mpz_class h_prev = 0, h = 1, k_prev = 1, k = 0;
  for (int it = 0; it < 64; ++it) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), rem.get_num_mpz_t(), rem.get_den_mpz_t());
    mpz_class h_next = a * h + h_prev;
    mpz_class k_next = a * k + k_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    mpq_class approx(h, k);
    approx.canonicalize();
    mpq_class err = approx - exact;
    if (abs(err) <= tol) return approx;
    mpq_class frac = rem - mpq_class(a);
    if (frac == 0) break;
    rem = 1 / frac;
  }
  return exact;
}

std::string render(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

class ExactTableau {
 public:
  explicit ExactTableau(const LinearProgram& lp) : lp_(lp), m_(lp.rows()), n_(lp.cols()) {
    width_ = n_ + m_ + 1;
    t_.assign(m_ * width_, mpq_class(0));
    sign_.assign(m_, 1);
    for (std::size_t i = 0; i < m_; ++i) {
      mpq_class b = rationalize(lp.rhs[i]);
      if (b < 0) sign_[i] = -1;
      at(i, n_ + m_) = sign_[i] * b;
      at(i, n_ + i) = 1;
    }
    for (const auto& tr : lp.triples) at(tr.row, tr.col) = sign_[tr.row] * rationalize(tr.value);
    cost_.assign(n_ + m_, mpq_class(0));
    for (std::size_t j = 0; j < n_; ++j) {
      cost_[j] = rationalize(lp.cost[j]);
      if (lp.sense == Sense::maximize) cost_[j] = -cost_[j];
    }
    head_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) head_[i] = n_ + i;
  }

  LpSolution run() {
    LpSolution out;
    std::vector<mpq_class> phase_one(n_ + m_, mpq_class(0));
    for (std::size_t i = 0; i < m_; ++i) phase_one[n_ + i] = 1;
    LpStatus status = iterate(phase_one);
    out.phase_one_iterations = iterations_;
    if (status != LpStatus::optimal) return finish(out, status);
    mpq_class infeas = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (head_[i] >= n_) infeas += at(i, n_ + m_);
    }
    if (infeas > 0) return finish(out, LpStatus::infeasible);

    for (std::size_t r = 0; r < m_; ++r) {
      if (head_[r] < n_) continue;
      std::size_t q = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!is_basic(j) && at(r, j) != 0) {
          q = j;
          break;
        }
      }
      if (q == n_) {
        ++out.redundant_rows;
        continue;
      }
      pivot(r, q);
    }
    status = iterate(cost_);
    return finish(out, status);
  }

 private:
  mpq_class& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  const mpq_class& at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }

  bool is_basic(std::size_t j) const {
    for (std::size_t h : head_) {
      if (h == j) return true;
    }
    return false;
  }

  void pivot(std::size_t r, std::size_t q) {
    mpq_class p = at(r, q);
    for (std::size_t j = 0; j < width_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      mpq_class f = at(i, q);
      if (f == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) {
        if (at(r, j) != 0) at(i, j) -= f * at(r, j);
      }
    }
    head_[r] = q;
  }

  LpStatus iterate(const std::vector<mpq_class>& cost) {
    const bool phase_two = &cost == &cost_;
    for (;;) {
      if (iterations_ >= 1'000'000) return LpStatus::iteration_limit;
      // Bland: lowest-index structural with negative reduced cost.
      std::size_t q = n_;
      for (std::size_t j = 0; j < n_ && q == n_; ++j) {
        if (is_basic(j)) continue;
        mpq_class d = cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
          if (at(i, j) != 0) d -= cost[head_[i]] * at(i, j);
        }
        if (d < 0) q = j;
      }
      if (q == n_) return LpStatus::optimal;

      std::size_t r = m_;
      mpq_class best;
      for (std::size_t i = 0; i < m_; ++i) {
        const mpq_class& a = at(i, q);
        bool held = phase_two && head_[i] >= n_ && a != 0;
        if (a <= 0 && !held) continue;
        mpq_class ratio = held ? mpq_class(0) : at(i, n_ + m_) / a;
        if (r == m_ || ratio < best || (ratio == best && head_[i] < head_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r == m_) return LpStatus::unbounded;
      ++iterations_;
      pivot(r, q);
    }
  }

  LpSolution finish(LpSolution& out, LpStatus status) {
    out.status = status;
    out.iterations = iterations_;
    out.bland_iterations = iterations_;
    if (status != LpStatus::optimal) return out;
    out.primal.assign(n_, 0.0);
    mpq_class obj = 0;
    std::vector<mpq_class> x(n_, mpq_class(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (head_[i] < n_) x[head_[i]] = at(i, n_ + m_);
    }
    for (std::size_t j = 0; j < n_; ++j) {
      out.primal[j] = x[j].get_d();
      obj += rationalize(lp_.cost[j]) * x[j];
    }
    out.objective = obj.get_d();
    out.exact_objective = render(obj);

    // y_i = c_B^T (B^{-1})_{., i}; artificial columns hold B^{-1}.
    out.dual.assign(m_, 0.0);
    std::vector<mpq_class> y(m_, mpq_class(0));
    for (std::size_t i = 0; i < m_; ++i) {
      mpq_class s = 0;
      for (std::size_t r = 0; r < m_; ++r) s += cost_[head_[r]] * at(r, n_ + i);
      y[i] = s * sign_[i];
      if (lp_.sense == Sense::maximize) y[i] = -y[i];
      out.dual[i] = y[i].get_d();
    }
    mpq_class dual_obj = 0;
    for (std::size_t i = 0; i < m_; ++i) dual_obj += rationalize(lp_.rhs[i]) * y[i];
    out.dual_objective = dual_obj.get_d();

    out.reduced_costs.assign(n_, 0.0);
    std::vector<mpq_class> aty(n_, mpq_class(0));
    for (const auto& tr : lp_.triples) aty[tr.col] += rationalize(tr.value) * y[tr.row];
    for (std::size_t j = 0; j < n_; ++j) {
      out.reduced_costs[j] = mpq_class(rationalize(lp_.cost[j]) - aty[j]).get_d();
    }
    return out;
  }

  const LinearProgram& lp_;
  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<mpq_class> t_;
  std::vector<int> sign_;
  std::vector<mpq_class> cost_;
  std::vector<std::size_t> head_;
  long iterations_ = 0;
};

}  // namespace

LpSolution solve_exact(const LinearProgram& lp, std::size_t max_variables) {
  lp.validate();
  if (lp.cols() > max_variables) {
    std::ostringstream os;
    os << lp.cols() << " variables exceed the exact-solver limit of " << max_variables;
    throw Error(ErrorKind::scale_exceeded, os.str());
  }
  ExactTableau tableau(lp);
  return tableau.run();
}

}  // namespace motbound
