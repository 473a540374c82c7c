#include "motbound/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "motbound/error.hpp"

namespace motbound {

namespace {

constexpr double kWeightSumTolerance = 1e-9;
constexpr double kCurveTolerance = 1e-10;

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<double> points, std::vector<double> weights) {
  if (points.size() != weights.size()) {
    throw Error(ErrorKind::invalid_measure, "points and weights differ in length");
  }
  if (points.empty()) throw Error(ErrorKind::invalid_measure, "no atoms");

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

  double total = 0.0;
  for (std::size_t idx : order) {
    double x = points[idx];
    double w = weights[idx];
    if (!std::isfinite(x) || !std::isfinite(w)) {
      throw Error(ErrorKind::invalid_measure, "non-finite atom or weight");
    }
    if (w < -1e-12) throw Error(ErrorKind::invalid_measure, "negative weight");
    if (w <= 0.0) continue;
    total += w;
    if (!points_.empty() && points_.back() == x) {
      weights_.back() += w;
    } else {
      points_.push_back(x);
      weights_.push_back(w);
    }
  }
  if (points_.empty()) throw Error(ErrorKind::invalid_measure, "all weights are zero");
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    std::ostringstream os;
    os << "weights sum to " << total << ", expected 1";
    throw Error(ErrorKind::invalid_measure, os.str());
  }
  for (double& w : weights_) w /= total;
  mean_ = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) mean_ += weights_[i] * points_[i];
}

DiscreteMeasure DiscreteMeasure::dirac(double x) { return DiscreteMeasure({x}, {1.0}); }

std::size_t DiscreteMeasure::heaviest_atom() const {
  return static_cast<std::size_t>(std::max_element(weights_.begin(), weights_.end()) -
                                  weights_.begin());
}

double DiscreteMeasure::weight_at(double x) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), x);
  if (it == points_.end() || *it != x) return 0.0;
  return weights_[static_cast<std::size_t>(it - points_.begin())];
}

double call_price(const DiscreteMeasure& measure, double strike) {
  double value = 0.0;
  auto pts = measure.points();
  auto wts = measure.weights();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i] > strike) value += wts[i] * (pts[i] - strike);
  }
  return value;
}

DiscreteMeasure from_call_curve(const CallCurve& curve, double s0) {
  const auto& q = curve.quotes;
  if (q.size() < 2) throw Error(ErrorKind::infeasible_curve, "need at least two quotes");
  for (std::size_t l = 0; l < q.size(); ++l) {
    if (!std::isfinite(q[l].strike) || !std::isfinite(q[l].price)) {
      throw Error(ErrorKind::infeasible_curve, "non-finite quote");
    }
    if (q[l].price < -kCurveTolerance) {
      throw Error(ErrorKind::infeasible_curve, "negative call price");
    }
    if (l > 0 && !(q[l].strike > q[l - 1].strike)) {
      throw Error(ErrorKind::infeasible_curve, "strikes must be strictly increasing");
    }
  }

  const std::size_t n = q.size();
  std::vector<double> slopes(n - 1);
  for (std::size_t l = 0; l + 1 < n; ++l) {
    slopes[l] = (q[l + 1].price - q[l].price) / (q[l + 1].strike - q[l].strike);
    if (slopes[l] < -1.0 - kCurveTolerance || slopes[l] > kCurveTolerance) {
      std::ostringstream os;
      os << "slope " << slopes[l] << " between strikes " << q[l].strike << " and "
         << q[l + 1].strike << " outside [-1, 0]";
      throw Error(ErrorKind::infeasible_curve, os.str());
    }
  }

  std::vector<double> points;
  std::vector<double> weights;

  // Left tail: put price at the first strike by parity; any positive put is
  // carried by one atom on the continuation of the first segment.
  const double first_slope = slopes.front();
  const double left_mass = 1.0 + first_slope;
  const double put0 = q.front().price - (s0 - q.front().strike);
  if (put0 < -kCurveTolerance) {
    std::ostringstream os;
    os << "call at strike " << q.front().strike << " is below intrinsic value for s0 = " << s0;
    throw Error(ErrorKind::infeasible_curve, os.str());
  }
  double mass_at_first = left_mass;
  if (put0 > kCurveTolerance) {
    if (left_mass <= kCurveTolerance) {
      throw Error(ErrorKind::infeasible_curve, "positive put value but no mass left of first strike");
    }
    points.push_back(q.front().strike - put0 / left_mass);
    weights.push_back(left_mass);
    mass_at_first = 0.0;
  }
  points.push_back(q.front().strike);
  weights.push_back(mass_at_first);

  for (std::size_t l = 1; l + 1 < n; ++l) {
    double jump = slopes[l] - slopes[l - 1];
    if (jump < -kCurveTolerance) {
      std::ostringstream os;
      os << "negative second difference " << jump << " at strike " << q[l].strike;
      throw Error(ErrorKind::infeasible_curve, os.str());
    }
    points.push_back(q[l].strike);
    weights.push_back(std::max(jump, 0.0));
  }

  const double right_mass = -slopes.back();
  const double last_price = q.back().price;
  if (last_price > kCurveTolerance) {
    if (right_mass <= kCurveTolerance) {
      throw Error(ErrorKind::infeasible_curve, "positive call value but flat last segment");
    }
    points.push_back(q.back().strike);
    weights.push_back(0.0);
    points.push_back(q.back().strike + last_price / right_mass);
    weights.push_back(right_mass);
  } else {
    points.push_back(q.back().strike);
    weights.push_back(std::max(right_mass, 0.0));
  }

  for (double& w : weights) {
    if (w <= kCurveTolerance) w = 0.0;
  }
  return DiscreteMeasure(std::move(points), std::move(weights));
}

CallCurve tabulate_call_curve(const DiscreteMeasure& measure, int maturity_index) {
  CallCurve curve;
  curve.maturity_index = maturity_index;
  double span = measure.back() - measure.front();
  double pad = span > 0.0 ? span : 1.0;
  curve.quotes.push_back({measure.front() - pad, call_price(measure, measure.front() - pad)});
  for (double x : measure.points()) curve.quotes.push_back({x, call_price(measure, x)});
  curve.quotes.push_back({measure.back() + pad, 0.0});
  return curve;
}

OrderReport convex_order_report(std::span<const DiscreteMeasure> marginals) {
  OrderReport report;
  if (marginals.empty()) {
    report.admissible = false;
    report.means_equal = false;
    return report;
  }
  const double s0 = marginals.front().mean();
  const double mean_tol = kOrderTolerance * std::max(1.0, std::abs(s0));
  for (const auto& mu : marginals) {
    report.max_mean_gap = std::max(report.max_mean_gap, std::abs(mu.mean() - s0));
  }
  report.means_equal = report.max_mean_gap <= mean_tol;

  bool ordered = true;
  for (std::size_t i = 0; i + 1 < marginals.size(); ++i) {
    const auto& a = marginals[i];
    const auto& b = marginals[i + 1];
    std::vector<double> strikes(a.points().begin(), a.points().end());
    strikes.insert(strikes.end(), b.points().begin(), b.points().end());
    std::sort(strikes.begin(), strikes.end());
    strikes.erase(std::unique(strikes.begin(), strikes.end()), strikes.end());

    PairOrder pair;
    pair.date = i;
    pair.worst_violation = -std::numeric_limits<double>::infinity();
    for (double k : strikes) {
      double v = call_price(a, k) - call_price(b, k);
      if (v > pair.worst_violation) {
        pair.worst_violation = v;
        pair.worst_strike = k;
      }
    }
    if (pair.worst_violation > kOrderTolerance) ordered = false;
    report.pairs.push_back(pair);
  }
  report.admissible = report.means_equal && ordered;
  return report;
}

MarginalSystem::MarginalSystem(std::vector<DiscreteMeasure> marginals)
    : marginals_(std::move(marginals)) {
  check_convex_order(*this);
}

OrderReport check_convex_order(MarginalSystem& system) {
  system.report_ = convex_order_report(system.marginals_);
  system.s0_ = system.marginals_.empty() ? 0.0 : system.marginals_.front().mean();
  system.admissible_ = system.report_.admissible;
  return system.report_;
}

namespace {

// 8-point Gauss-Legendre on [-1, 1]; exact for polynomials of degree 15.
constexpr std::array<double, 8> kGlNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// Cumulative zeroth and first moments of a density, tabulated on panels
// that never straddle a breakpoint.
class MomentTable {
 public:
  MomentTable(const DensitySpec& spec, int panels_per_piece) : spec_(spec) {
    std::vector<double> cuts{spec.lo};
    for (double b : spec.breakpoints) {
      if (b > spec.lo && b < spec.hi) cuts.push_back(b);
    }
    cuts.push_back(spec.hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    edges_.push_back(cuts.front());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      for (int p = 1; p <= panels_per_piece; ++p) {
        double t = static_cast<double>(p) / panels_per_piece;
        edges_.push_back(p == panels_per_piece ? cuts[k + 1]
                                               : cuts[k] + t * (cuts[k + 1] - cuts[k]));
      }
    }
    mass_.assign(edges_.size(), 0.0);
    first_.assign(edges_.size(), 0.0);
    for (std::size_t e = 1; e < edges_.size(); ++e) {
      auto [m0, m1] = integrate(edges_[e - 1], edges_[e]);
      mass_[e] = mass_[e - 1] + m0;
      first_[e] = first_[e - 1] + m1;
    }
  }

  double total_mass() const { return mass_.back(); }
  double total_first() const { return first_.back(); }

  // (mass, first moment) of [lo, x].
  std::pair<double, double> cumulative(double x) const {
    if (x <= edges_.front()) return {0.0, 0.0};
    if (x >= edges_.back()) return {mass_.back(), first_.back()};
    auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    std::size_t e = static_cast<std::size_t>(it - edges_.begin()) - 1;
    auto [m0, m1] = integrate(edges_[e], x);
    return {mass_[e] + m0, first_[e] + m1};
  }

 private:
  std::pair<double, double> integrate(double a, double b) const {
    double half = 0.5 * (b - a);
    double mid = 0.5 * (a + b);
    double m0 = 0.0;
    double m1 = 0.0;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
      double x = mid + half * kGlNodes[k];
      double f = spec_.density(x);
      if (!std::isfinite(f) || f < 0.0) {
        std::ostringstream os;
        os << "density is negative or non-finite at " << x;
        throw Error(ErrorKind::bad_spec, os.str());
      }
      m0 += kGlWeights[k] * f;
      m1 += kGlWeights[k] * f * x;
    }
    return {m0 * half, m1 * half};
  }

  const DensitySpec& spec_;
  std::vector<double> edges_;
  std::vector<double> mass_;
  std::vector<double> first_;
};

}  // namespace

DiscreteMeasure discretize(const DensitySpec& spec, int m, Binning binning) {
  if (m < 2) throw Error(ErrorKind::bad_spec, "need at least two cells");
  if (!(spec.lo < spec.hi) || !std::isfinite(spec.lo) || !std::isfinite(spec.hi)) {
    throw Error(ErrorKind::bad_spec, "support must be a finite interval [lo, hi] with lo < hi");
  }
  if (!spec.density) throw Error(ErrorKind::bad_spec, "missing density");

  MomentTable table(spec, 64);
  const double total = table.total_mass();
  if (!(total > 0.0) || !std::isfinite(total) || !std::isfinite(table.total_first())) {
    throw Error(ErrorKind::bad_spec, "density has no finite positive mass");
  }

  std::vector<double> cuts(static_cast<std::size_t>(m) + 1);
  cuts.front() = spec.lo;
  cuts.back() = spec.hi;
  for (int k = 1; k < m; ++k) {
    if (binning == Binning::equal_width) {
      cuts[static_cast<std::size_t>(k)] = spec.lo + (spec.hi - spec.lo) * k / m;
      continue;
    }
    const double target = total * k / m;
    double a = cuts[static_cast<std::size_t>(k) - 1];
    double b = spec.hi;
    for (int it = 0; it < 200 && b - a > 1e-16 * (1.0 + std::abs(a)); ++it) {
      double c = 0.5 * (a + b);
      if (table.cumulative(c).first < target) a = c;
      else b = c;
    }
    cuts[static_cast<std::size_t>(k)] = 0.5 * (a + b);
  }

  std::vector<double> points;
  std::vector<double> weights;
  auto prev = table.cumulative(cuts.front());
  for (int k = 0; k < m; ++k) {
    auto next = table.cumulative(cuts[static_cast<std::size_t>(k) + 1]);
    double mass = next.first - prev.first;
    double first = next.second - prev.second;
    prev = next;
    if (mass <= 0.0) continue;
    double bary = std::clamp(first / mass, cuts[static_cast<std::size_t>(k)],
                             cuts[static_cast<std::size_t>(k) + 1]);
    points.push_back(bary);
    weights.push_back(mass / total);
  }
  return DiscreteMeasure(std::move(points), std::move(weights));
}

DensitySpec uniform_density(double lo, double hi) {
  DensitySpec spec;
  spec.lo = lo;
  spec.hi = hi;
  spec.density = [w = 1.0 / (hi - lo)](double) { return w; };
  return spec;
}

std::vector<Block> detect_barriers(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                                   double tol) {
  std::vector<double> merged(mu1.points().begin(), mu1.points().end());
  merged.insert(merged.end(), mu2.points().begin(), mu2.points().end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  std::vector<double> gap(merged.size());
  for (std::size_t k = 0; k < merged.size(); ++k) {
    gap[k] = call_price(mu2, merged[k]) - call_price(mu1, merged[k]);
  }

  std::vector<double> levels;
  for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
    if (std::abs(gap[k]) > tol || std::abs(gap[k + 1]) > tol) continue;
    double p = merged[k];
    double q = merged[k + 1];
    double wp = mu2.weight_at(p);
    double wq = mu2.weight_at(q);
    levels.push_back(wp > 0.0 && wq > 0.0 ? p + (q - p) * wp / (wp + wq) : 0.5 * (p + q));
  }

  std::vector<Block> blocks;
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b <= levels.size(); ++b) {
    Block block;
    block.lo = b == 0 ? -inf : levels[b - 1];
    block.hi = b == levels.size() ? inf : levels[b];
    auto restrict = [&](const DiscreteMeasure& mu, double& mass) {
      std::vector<double> pts;
      std::vector<double> wts;
      mass = 0.0;
      for (std::size_t i = 0; i < mu.size(); ++i) {
        double x = mu.points()[i];
        if (x > block.lo && x < block.hi) {
          pts.push_back(x);
          wts.push_back(mu.weights()[i]);
          mass += mu.weights()[i];
        }
      }
      for (double& w : wts) w /= mass;
      return DiscreteMeasure(std::move(pts), std::move(wts));
    };
    double mass2 = 0.0;
    block.first = restrict(mu1, block.mass);
    block.second = restrict(mu2, mass2);
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<double> barrier_levels(std::span<const Block> blocks) {
  std::vector<double> levels;
  for (std::size_t b = 0; b + 1 < blocks.size(); ++b) levels.push_back(blocks[b].hi);
  return levels;
}

MarginalSystem counterexample_marginals(int blocks, int atoms_per_block) {
  if (blocks < 1 || atoms_per_block < 2) {
    throw Error(ErrorKind::bad_spec, "need blocks >= 1 and atoms_per_block >= 2");
  }
  std::vector<double> edges{0.0};
  for (int n = 1; n <= blocks; ++n) edges.push_back(edges.back() + 1.0 / (double(n) * n));
  if (edges.back() < 2.0) edges.push_back(2.0);

  std::vector<double> p1;
  std::vector<double> w1;
  std::vector<double> p2;
  std::vector<double> w2;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    double lo = edges[b];
    double len = edges[b + 1] - lo;
    p1.push_back(lo + 0.5 * len);
    w1.push_back(0.5 * len);
    for (int k = 0; k < atoms_per_block; ++k) {
      p2.push_back(lo + (k + 0.5) * len / atoms_per_block);
      w2.push_back(0.5 * len / atoms_per_block);
    }
  }
  return MarginalSystem({DiscreteMeasure(std::move(p1), std::move(w1)),
                         DiscreteMeasure(std::move(p2), std::move(w2))});
}

}  // namespace motbound
