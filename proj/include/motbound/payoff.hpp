#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace motbound {

enum class PayoffKind {
  forward_start_call,      // (s2 - K s1)^+
  forward_start_straddle,  // |s2 - s1|
  negated_straddle,        // -|s2 - s1|
  asian_call,              // (mean(s) - K)^+
  lookback_call,           // (max(s) - K)^+
  tabulated,               // values on a grid product, off-grid queries fail
  custom,
};

std::string_view to_string(PayoffKind kind);
PayoffKind payoff_kind_from_string(std::string_view name);

using PayoffFn = std::function<double(std::span<const double>)>;
// Kinks of s_n -> payoff(prefix, s_n) given the prefix s_1..s_{n-1}.
using KinksFn = std::function<std::vector<double>(std::span<const double>)>;

/// Exotic payoff on n observation dates.
///
/// Every payoff carries a growth constant K_g with
/// payoff(s) >= -K_g (1 + sum |s_i|); custom payoffs must declare it.
class Payoff {
 public:
  static Payoff forward_start_call(double strike);
  static Payoff forward_start_straddle();
  static Payoff negated_straddle();
  static Payoff asian_call(int dates, double strike);
  static Payoff lookback_call(int dates, double strike);
  // grids[i] are strictly increasing; values are row-major with the last
  // date varying fastest.
  static Payoff tabulated(std::vector<std::vector<double>> grids, std::vector<double> values);
  static Payoff custom(int dates, PayoffFn fn, double growth_constant, KinksFn kinks = {});

  int dates() const { return dates_; }
  PayoffKind kind() const { return kind_; }
  double strike() const { return strike_; }
  double growth_constant() const { return growth_constant_; }

  double evaluate(std::span<const double> s) const;
  double operator()(std::span<const double> s) const { return evaluate(s); }
  double operator()(double s1, double s2) const;

  /// Kink locations in the last coordinate for a fixed prefix, when the
  /// payoff is known to be piecewise linear in it; nullopt otherwise.
  std::optional<std::vector<double>> last_coordinate_kinks(std::span<const double> prefix) const;

  /// payoff + c, keeping the kink structure.
  Payoff plus_constant(double c) const;

  const std::vector<std::vector<double>>& grids() const;

 private:
  struct Table {
    std::vector<std::vector<double>> grids;
    std::vector<double> values;
  };

  Payoff(PayoffKind kind, int dates) : kind_(kind), dates_(dates) {}
  std::size_t grid_index(std::size_t date, double x) const;

  PayoffKind kind_ = PayoffKind::custom;
  int dates_ = 0;
  double strike_ = 0.0;
  double growth_constant_ = 0.0;
  std::shared_ptr<const Table> table_;
  PayoffFn fn_;
  KinksFn kinks_;
};

/// Checks payoff(s) >= -K_g (1 + sum |s_i|) on `samples` random points
/// (grid points for tabulated payoffs). Returns the worst margin found;
/// the certificate holds when it is >= 0.
double growth_certificate_margin(const Payoff& payoff, int samples = 10000,
                                 std::uint64_t seed = 7);

/// Payoff values over the grid product, row-major in date order (last date
/// fastest).
std::vector<double> tabulate(const Payoff& payoff, const std::vector<std::vector<double>>& grids);

}  // namespace motbound
