#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "motbound/error.hpp"
#include "motbound/measures.hpp"
#include "motbound/payoff.hpp"

namespace fixtures {

using namespace motbound;

inline MarginalSystem instance_a() {
  return MarginalSystem({DiscreteMeasure({-1, 1}, {0.5, 0.5}),
                         DiscreteMeasure({-2, 0, 2}, {1.0 / 3, 1.0 / 3, 1.0 / 3})});
}

// Indicator of the cell (-1, -2) of instance A.
inline Payoff corner_indicator() {
  return Payoff::custom(
      2, [](std::span<const double> s) { return (s[0] == -1.0 && s[1] == -2.0) ? 1.0 : 0.0; }, 0.0);
}

inline DensitySpec trapezoid() {
  DensitySpec d;
  d.lo = -2;
  d.hi = 2;
  d.density = [](double s) { return s < -1 ? (2 + s) / 3 : s > 1 ? (2 - s) / 3 : 1.0 / 3; };
  d.breakpoints = {-1, 1};
  return d;
}

inline MarginalSystem trapezoid_instance(int m) {
  return MarginalSystem({discretize(uniform_density(-1, 1), m), discretize(trapezoid(), m)});
}

inline DensitySpec truncated_normal(double mean, double sd) {
  DensitySpec d;
  d.lo = mean - 4 * sd;
  d.hi = mean + 4 * sd;
  d.density = [mean, sd](double x) { return std::exp(-0.5 * (x - mean) * (x - mean) / (sd * sd)); };
  return d;
}

// Two maturities around spot 1.
inline MarginalSystem sweep_instance() {
  return MarginalSystem({discretize(truncated_normal(1.0, 0.1), 15), discretize(truncated_normal(1.0, 0.2), 31)});
}

inline DiscreteMeasure random_measure(std::mt19937_64& rng, int max_atoms = 8) {
  std::uniform_int_distribution<int> count(1, max_atoms);
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  std::uniform_real_distribution<double> wt(0.05, 1.0);
  const int n = count(rng);
  std::vector<double> p(n), w(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    p[i] = std::round(pos(rng) * 100.0) / 100.0;
    w[i] = wt(rng);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return DiscreteMeasure(p, w);
}

// A measure dominating mu in convex order: each atom x spreads to x -/+ a
// with equal mass.
inline DiscreteMeasure spread(const DiscreteMeasure& mu, double a) {
  std::vector<double> p, w;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    p.push_back(mu.points()[i] - a);
    p.push_back(mu.points()[i] + a);
    w.push_back(mu.weights()[i] / 2);
    w.push_back(mu.weights()[i] / 2);
  }
  return DiscreteMeasure(p, w);
}

// Kind of the Error thrown by f, nullopt if none.
template <class F>
std::optional<ErrorKind> kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace fixtures
