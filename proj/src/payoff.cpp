#include "motbound/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "motbound/error.hpp"
#include "motbound/kernels.hpp"

namespace motbound {

std::string_view to_string(PayoffKind kind) {
  switch (kind) {
    case PayoffKind::forward_start_call: return "forward_start_call";
    case PayoffKind::forward_start_straddle: return "forward_start_straddle";
    case PayoffKind::negated_straddle: return "negated_straddle";
    case PayoffKind::asian_call: return "asian_call";
    case PayoffKind::lookback_call: return "lookback_call";
    case PayoffKind::tabulated: return "tabulated";
    case PayoffKind::custom: return "custom";
  }
  return "custom";
}

PayoffKind payoff_kind_from_string(std::string_view name) {
  for (auto kind : {PayoffKind::forward_start_call, PayoffKind::forward_start_straddle,
                    PayoffKind::negated_straddle, PayoffKind::asian_call,
                    PayoffKind::lookback_call, PayoffKind::tabulated, PayoffKind::custom}) {
    if (to_string(kind) == name) return kind;
  }
  if (name == "straddle") return PayoffKind::forward_start_straddle;
  throw Error(ErrorKind::invalid_input, "unknown payoff kind '" + std::string(name) + "'");
}

Payoff Payoff::forward_start_call(double strike) {
  Payoff p(PayoffKind::forward_start_call, 2);
  p.strike_ = strike;
  return p;
}

Payoff Payoff::forward_start_straddle() { return Payoff(PayoffKind::forward_start_straddle, 2); }

Payoff Payoff::negated_straddle() {
  Payoff p(PayoffKind::negated_straddle, 2);
  p.growth_constant_ = 1.0;
  return p;
}

Payoff Payoff::asian_call(int dates, double strike) {
  if (dates < 1) throw Error(ErrorKind::bad_spec, "asian call needs at least one date");
  Payoff p(PayoffKind::asian_call, dates);
  p.strike_ = strike;
  return p;
}

Payoff Payoff::lookback_call(int dates, double strike) {
  if (dates < 1) throw Error(ErrorKind::bad_spec, "lookback call needs at least one date");
  Payoff p(PayoffKind::lookback_call, dates);
  p.strike_ = strike;
  return p;
}

Payoff Payoff::tabulated(std::vector<std::vector<double>> grids, std::vector<double> values) {
  if (grids.empty()) throw Error(ErrorKind::bad_spec, "tabulated payoff needs grids");
  for (const auto& g : grids) {
    if (g.empty()) throw Error(ErrorKind::bad_spec, "empty grid");
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (!(g[i] > g[i - 1])) throw Error(ErrorKind::bad_spec, "grid must be strictly increasing");
    }
  }
  if (values.size() != kernels::cell_count(grids)) {
    throw Error(ErrorKind::dimension_mismatch, "tabulated values do not match the grid product");
  }
  Payoff p(PayoffKind::tabulated, static_cast<int>(grids.size()));
  double worst = 0.0;
  std::vector<double> s(grids.size());
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (!std::isfinite(values[c])) throw Error(ErrorKind::bad_spec, "non-finite tabulated value");
    kernels::cell_coordinates(grids, c, s);
    double scale = 1.0;
    for (double x : s) scale += std::abs(x);
    worst = std::max(worst, -values[c] / scale);
  }
  p.growth_constant_ = worst;
  p.table_ = std::make_shared<const Table>(Table{std::move(grids), std::move(values)});
  return p;
}

Payoff Payoff::custom(int dates, PayoffFn fn, double growth_constant, KinksFn kinks) {
  if (dates < 1) throw Error(ErrorKind::bad_spec, "custom payoff needs at least one date");
  if (!fn) throw Error(ErrorKind::bad_spec, "custom payoff needs a function");
  if (!std::isfinite(growth_constant) || growth_constant < 0.0) {
    throw Error(ErrorKind::bad_spec, "custom payoff must register a finite growth constant >= 0");
  }
  Payoff p(PayoffKind::custom, dates);
  p.fn_ = std::move(fn);
  p.kinks_ = std::move(kinks);
  p.growth_constant_ = growth_constant;
  return p;
}

std::size_t Payoff::grid_index(std::size_t date, double x) const {
  const auto& g = table_->grids[date];
  auto it = std::lower_bound(g.begin(), g.end(), x - 1e-12 * (1.0 + std::abs(x)));
  if (it == g.end() || std::abs(*it - x) > 1e-12 * (1.0 + std::abs(x))) {
    std::ostringstream os;
    os << "coordinate " << x << " of date " << date + 1 << " is not a grid point";
    throw Error(ErrorKind::off_grid, os.str());
  }
  return static_cast<std::size_t>(it - g.begin());
}

double Payoff::evaluate(std::span<const double> s) const {
  if (static_cast<int>(s.size()) != dates_) {
    std::ostringstream os;
    os << "payoff on " << dates_ << " dates evaluated at " << s.size() << " coordinates";
    throw Error(ErrorKind::dimension_mismatch, os.str());
  }
  switch (kind_) {
    case PayoffKind::forward_start_call: return std::max(s[1] - strike_ * s[0], 0.0);
    case PayoffKind::forward_start_straddle: return std::abs(s[1] - s[0]);
    case PayoffKind::negated_straddle: return -std::abs(s[1] - s[0]);
    case PayoffKind::asian_call: {
      double sum = 0.0;
      for (double x : s) sum += x;
      return std::max(sum / static_cast<double>(s.size()) - strike_, 0.0);
    }
    case PayoffKind::lookback_call:
      return std::max(*std::max_element(s.begin(), s.end()) - strike_, 0.0);
    case PayoffKind::tabulated: {
      std::size_t flat = 0;
      for (std::size_t d = 0; d < s.size(); ++d) {
        flat = flat * table_->grids[d].size() + grid_index(d, s[d]);
      }
      return table_->values[flat];
    }
    case PayoffKind::custom: return fn_(s);
  }
  return 0.0;
}

double Payoff::operator()(double s1, double s2) const {
  const double s[2] = {s1, s2};
  return evaluate(s);
}

std::optional<std::vector<double>> Payoff::last_coordinate_kinks(
    std::span<const double> prefix) const {
  switch (kind_) {
    case PayoffKind::forward_start_call: return std::vector<double>{strike_ * prefix[0]};
    case PayoffKind::forward_start_straddle:
    case PayoffKind::negated_straddle: return std::vector<double>{prefix[0]};
    case PayoffKind::asian_call: {
      double sum = 0.0;
      for (double x : prefix) sum += x;
      return std::vector<double>{static_cast<double>(dates_) * strike_ - sum};
    }
    case PayoffKind::lookback_call: {
      std::vector<double> k{strike_};
      if (!prefix.empty()) k.push_back(*std::max_element(prefix.begin(), prefix.end()));
      return k;
    }
    case PayoffKind::tabulated: return std::nullopt;
    case PayoffKind::custom:
      if (kinks_) return kinks_(prefix);
      return std::nullopt;
  }
  return std::nullopt;
}

Payoff Payoff::plus_constant(double c) const {
  Payoff base = *this;
  KinksFn kinks;
  if (kind_ != PayoffKind::tabulated && (kind_ != PayoffKind::custom || kinks_)) {
    kinks = [base](std::span<const double> prefix) {
      return *base.last_coordinate_kinks(prefix);
    };
  }
  double growth = growth_constant_ + std::max(0.0, -c);
  return custom(
      dates_, [base, c](std::span<const double> s) { return base.evaluate(s) + c; }, growth,
      std::move(kinks));
}

const std::vector<std::vector<double>>& Payoff::grids() const {
  static const std::vector<std::vector<double>> none;
  return table_ ? table_->grids : none;
}

double growth_certificate_margin(const Payoff& payoff, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::size_t>(payoff.dates());
  std::vector<double> s(n);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    if (payoff.kind() == PayoffKind::tabulated) {
      const auto& grids = payoff.grids();
      for (std::size_t d = 0; d < n; ++d) {
        std::uniform_int_distribution<std::size_t> pick(0, grids[d].size() - 1);
        s[d] = grids[d][pick(rng)];
      }
    } else {
      std::uniform_real_distribution<double> coord(-100.0, 100.0);
      for (auto& x : s) x = coord(rng);
    }
    double scale = 1.0;
    for (double x : s) scale += std::abs(x);
    worst = std::min(worst, payoff.evaluate(s) + payoff.growth_constant() * scale);
  }
  return worst;
}

std::vector<double> tabulate(const Payoff& payoff, const std::vector<std::vector<double>>& grids) {
  if (grids.size() != static_cast<std::size_t>(payoff.dates())) {
    throw Error(ErrorKind::dimension_mismatch, "one grid per payoff date required");
  }
  for (const auto& g : grids) {
    if (g.empty()) throw Error(ErrorKind::bad_spec, "empty grid");
  }
  return kernels::omp::tabulate(payoff, grids);
}

}  // namespace motbound
