#include "motbound/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "motbound/error.hpp"
#include "motbound/kernels.hpp"

namespace motbound::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::invalid_input, what); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) {
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

double number(const std::string& s) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) fail("not a number: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail("not a number: '" + s + "'");
  }
}

// Non-empty, non-comment lines split on commas.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    rows.push_back(split(line, ','));
  }
  return rows;
}

bool is_header(const std::vector<std::string>& row) {
  for (const auto& c : row) {
    try {
      number(c);
    } catch (const Error&) {
      return true;
    }
  }
  return false;
}

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

json nums(std::span<const double> xs) {
  json a = json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

std::vector<double> doubles(const json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) fail(std::string(what) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  double r = std::stod(fmt(x));
  return r == 0.0 ? 0.0 : r;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write " + path);
  out << text;
  if (!out) fail("write failed for " + path);
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    fail(path + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_json(const std::string& path, const json& j) { write_text(path, dump(j)); }

namespace {

std::vector<CallCurve> group(std::vector<std::tuple<int, double, double>> rows) {
  std::map<int, CallCurve> by;
  for (auto& [i, k, c] : rows) {
    if (!std::isfinite(k) || !std::isfinite(c)) fail("non-finite quote");
    auto& curve = by[i];
    curve.maturity_index = i;
    curve.quotes.push_back({k, c});
  }
  std::vector<CallCurve> out;
  for (auto& [i, curve] : by) {
    std::sort(curve.quotes.begin(), curve.quotes.end(),
              [](const CallQuote& a, const CallQuote& b) { return a.strike < b.strike; });
    for (std::size_t q = 1; q < curve.quotes.size(); ++q) {
      if (curve.quotes[q].strike == curve.quotes[q - 1].strike) {
        fail("duplicate strike " + fmt(curve.quotes[q].strike) + " for maturity " + std::to_string(i));
      }
    }
    out.push_back(std::move(curve));
  }
  if (out.empty()) fail("no quotes");
  return out;
}

}  // namespace

std::vector<CallCurve> quotes_from_csv(const std::string& text) {
  auto rows = csv_rows(text);
  std::vector<std::tuple<int, double, double>> q;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r == 0 && is_header(rows[r])) continue;
    if (rows[r].size() != 3) fail("quote rows need maturity_index,strike,price");
    q.emplace_back(static_cast<int>(number(rows[r][0])), number(rows[r][1]), number(rows[r][2]));
  }
  return group(std::move(q));
}

std::vector<CallCurve> quotes_from_json(const json& j) {
  if (!j.is_array()) fail("quote JSON must be an array of {i, K, C}");
  std::vector<std::tuple<int, double, double>> q;
  try {
    for (const auto& e : j) q.emplace_back(e.at("i").get<int>(), e.at("K").get<double>(), e.at("C").get<double>());
  } catch (const json::exception& e) {
    fail(std::string("bad quote entry: ") + e.what());
  }
  return group(std::move(q));
}

std::vector<CallCurve> read_quotes(const std::string& path) {
  if (ends_with(path, ".json")) return quotes_from_json(read_json(path));
  return quotes_from_csv(read_text(path));
}

json to_json(const DiscreteMeasure& mu) {
  return json{{"points", nums(mu.points())}, {"weights", nums(mu.weights())}, {"mean", num(mu.mean())}};
}

DiscreteMeasure measure_from_json(const json& j) {
  if (!j.is_object()) fail("measure JSON must be an object");
  if (j.contains("density")) {
    const auto& pieces = j.at("density");
    if (!pieces.is_array() || pieces.empty()) fail("density needs a non-empty array of pieces");
    struct Piece {
      double lo, hi;
      std::vector<double> c;
    };
    std::vector<Piece> ps;
    for (const auto& p : pieces) {
      if (!p.contains("lo") || !p.contains("hi") || !p.contains("coeffs")) fail("density pieces need lo, hi, coeffs");
      ps.push_back({p.at("lo").get<double>(), p.at("hi").get<double>(), doubles(p.at("coeffs"), "coeffs")});
    }
    std::sort(ps.begin(), ps.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    DensitySpec spec;
    spec.lo = ps.front().lo;
    spec.hi = ps.back().hi;
    for (std::size_t i = 1; i < ps.size(); ++i) spec.breakpoints.push_back(ps[i].lo);
    spec.density = [ps](double x) {
      for (const auto& p : ps) {
        if (x >= p.lo && x <= p.hi) {
          double v = 0.0;
          for (std::size_t k = p.c.size(); k-- > 0;) v = v * x + p.c[k];
          return v;
        }
      }
      return 0.0;
    };
    int m = j.value("m", 101);
    std::string binning = j.value("binning", "equal_mass");
    if (binning != "equal_mass" && binning != "equal_width") fail("binning must be equal_mass or equal_width");
    return discretize(spec, m, binning == "equal_mass" ? Binning::equal_mass : Binning::equal_width);
  }
  if (!j.contains("points") || !j.contains("weights")) fail("measure JSON needs points and weights");
  return DiscreteMeasure(doubles(j.at("points"), "points"), doubles(j.at("weights"), "weights"));
}

DiscreteMeasure read_measure(const std::string& path) {
  json j = read_json(path);
  try {
    return measure_from_json(j);
  } catch (const json::exception& e) {
    fail(path + ": " + e.what());
  }
}

Payoff tabulated_payoff_from_csv(const std::string& text) {
  auto rows = csv_rows(text);
  if (!rows.empty() && is_header(rows[0])) rows.erase(rows.begin());
  if (rows.empty()) fail("empty payoff table");
  const std::size_t n = rows[0].size() - 1;
  if (n < 1) fail("payoff table needs coordinates and a value column");
  std::vector<std::vector<double>> grids(n);
  std::vector<std::pair<std::vector<double>, double>> cells;
  for (const auto& r : rows) {
    if (r.size() != n + 1) fail("ragged payoff table");
    std::vector<double> s(n);
    for (std::size_t d = 0; d < n; ++d) {
      s[d] = number(r[d]);
      grids[d].push_back(s[d]);
    }
    cells.emplace_back(s, number(r[n]));
  }
  for (auto& g : grids) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
  }
  if (cells.size() != kernels::cell_count(grids)) fail("payoff table must cover the full grid product exactly once");
  std::vector<double> values(cells.size());
  std::vector<char> seen(cells.size(), 0);
  for (const auto& [s, v] : cells) {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < n; ++d) {
      flat = flat * grids[d].size() +
             static_cast<std::size_t>(std::lower_bound(grids[d].begin(), grids[d].end(), s[d]) - grids[d].begin());
    }
    if (seen[flat]) fail("payoff table repeats a cell");
    seen[flat] = 1;
    values[flat] = v;
  }
  return Payoff::tabulated(std::move(grids), std::move(values));
}

Payoff payoff_from_json(const json& j) {
  try {
    const std::string kind_name = j.at("kind").get<std::string>();
    const PayoffKind kind = payoff_kind_from_string(kind_name);
    const json params = j.value("params", json::object());
    const int n = j.value("n", 2);
    const double strike = params.value("strike", params.value("K", 1.0));
    switch (kind) {
      case PayoffKind::forward_start_call: return Payoff::forward_start_call(strike);
      case PayoffKind::forward_start_straddle: return Payoff::forward_start_straddle();
      case PayoffKind::negated_straddle: return Payoff::negated_straddle();
      case PayoffKind::asian_call: return Payoff::asian_call(n, strike);
      case PayoffKind::lookback_call: return Payoff::lookback_call(n, strike);
      case PayoffKind::tabulated:
        if (j.contains("csv")) return tabulated_payoff_from_csv(read_text(j.at("csv").get<std::string>()));
        {
          std::vector<std::vector<double>> grids;
          for (const auto& g : j.at("grids")) grids.push_back(doubles(g, "grids"));
          return Payoff::tabulated(std::move(grids), doubles(j.at("values"), "values"));
        }
      case PayoffKind::custom: fail("custom payoffs cannot be loaded from files");
    }
  } catch (const json::exception& e) {
    fail(std::string("bad payoff spec: ") + e.what());
  }
  fail("bad payoff spec");
}

Payoff parse_payoff(const std::string& spec) {
  if (ends_with(spec, ".json")) return payoff_from_json(read_json(spec));
  if (ends_with(spec, ".csv")) return tabulated_payoff_from_csv(read_text(spec));
  auto parts = split(spec, ':');
  if (parts.empty()) fail("empty payoff spec");
  const PayoffKind kind = payoff_kind_from_string(parts[0]);
  auto arg = [&](std::size_t i) {
    if (parts.size() <= i) fail("payoff '" + parts[0] + "' needs more parameters");
    return number(parts[i]);
  };
  switch (kind) {
    case PayoffKind::forward_start_call: return Payoff::forward_start_call(parts.size() > 1 ? arg(1) : 1.0);
    case PayoffKind::forward_start_straddle: return Payoff::forward_start_straddle();
    case PayoffKind::negated_straddle: return Payoff::negated_straddle();
    case PayoffKind::asian_call: return Payoff::asian_call(static_cast<int>(arg(1)), arg(2));
    case PayoffKind::lookback_call: return Payoff::lookback_call(static_cast<int>(arg(1)), arg(2));
    case PayoffKind::tabulated:
    case PayoffKind::custom: break;
  }
  fail("payoff '" + spec + "' needs a file");
}

json to_json(const LinearProgram& lp) {
  json t = json::array();
  for (const auto& x : lp.triples) t.push_back(json::array({x.row, x.col, x.value}));
  json cost = json::array();
  for (double c : lp.cost) cost.push_back(c);
  json rhs = json::array();
  for (double b : lp.rhs) rhs.push_back(b);
  return json{{"sense", lp.sense == Sense::minimize ? "min" : "max"}, {"cost", cost}, {"triples", t}, {"rhs", rhs}};
}

LinearProgram lp_from_json(const json& j) {
  LinearProgram lp;
  try {
    std::string sense = j.at("sense").get<std::string>();
    if (sense != "min" && sense != "max") fail("LP sense must be min or max");
    lp.sense = sense == "min" ? Sense::minimize : Sense::maximize;
    lp.cost = doubles(j.at("cost"), "cost");
    lp.rhs = doubles(j.at("rhs"), "rhs");
    for (const auto& t : j.at("triples")) {
      if (!t.is_array() || t.size() != 3) fail("LP triples are [row, col, value]");
      lp.triples.push_back({t[0].get<std::size_t>(), t[1].get<std::size_t>(), t[2].get<double>()});
    }
  } catch (const json::exception& e) {
    fail(std::string("bad LP JSON: ") + e.what());
  }
  lp.validate();
  return lp;
}

json to_json(const CallPortfolio& p) {
  json legs = json::array();
  for (const auto& l : p.legs) {
    legs.push_back({{"date", l.date + 1}, {"strike", num(l.strike)}, {"quantity", num(l.quantity)}});
  }
  return json{{"cash", num(p.cash)}, {"forwards", nums(p.forwards)}, {"calls", legs}};
}

json to_json(const SemiStaticHedge& h) {
  json statics = json::array();
  for (std::size_t i = 0; i < h.statics.size(); ++i) {
    const auto& u = h.statics[i];
    auto port = to_call_portfolio(u, i);
    json calls = json::array();
    for (const auto& l : port.legs) calls.push_back({{"strike", num(l.strike)}, {"quantity", num(l.quantity)}});
    statics.push_back({{"date", i + 1},
                       {"knots", nums(u.knots())},
                       {"values", nums(u.values())},
                       {"left_slope", num(u.left_slope())},
                       {"right_slope", num(u.right_slope())},
                       {"cash", num(port.cash)},
                       {"forward", num(port.forwards[i])},
                       {"calls", calls}});
  }
  json deltas = json::array();
  for (std::size_t j = 0; j < h.deltas.size(); ++j) {
    json grids = json::array();
    for (const auto& g : h.deltas[j].grids) grids.push_back(nums(g));
    deltas.push_back({{"between", json::array({j + 1, j + 2})}, {"grids", grids}, {"values", nums(h.deltas[j].values)}});
  }
  return json{{"sense", std::string(to_string(h.sense))}, {"cash", num(h.cash)}, {"statics", statics}, {"deltas", deltas}};
}

json to_json(const VerificationReport& r) {
  json sizes = json::array();
  for (auto s : r.grid_sizes) sizes.push_back(s);
  json j{{"tolerance", num(r.tolerance)},
         {"grid_sizes", sizes},
         {"max_violation", num(r.max_violation)},
         {"worst_cell", nums(r.worst_cell)},
         {"valid", r.valid},
         {"continuum_checked", r.continuum_checked}};
  if (r.continuum_checked) {
    j["continuum_violation"] = num(r.continuum_violation);
    j["continuum_worst"] = nums(r.continuum_worst);
    j["tail_slope_violation"] = num(r.tail_slope_violation);
    j["continuum_valid"] = r.continuum_valid;
    j["max_wing_slope"] = num(r.max_wing_slope);
    j["wing_slope_bound"] = num(r.wing_slope_bound);
    j["wing_slopes_ok"] = r.wing_slopes_ok;
  }
  return j;
}

json to_json(const MotDiagnostics& d) {
  return json{{"lp_status", std::string(to_string(d.lp_status))},
              {"lp_iterations", d.lp_iterations},
              {"redundant_rows", d.redundant_rows},
              {"duality_gap", num(d.duality_gap)},
              {"max_marginal_residual", num(d.max_marginal_residual)},
              {"max_martingale_residual", num(d.max_martingale_residual)},
              {"max_slackness_violation", num(d.max_slackness_violation)},
              {"hedge_price", num(d.hedge_price)},
              {"bland_retry", d.bland_retry},
              {"hedge_source", d.hedge_source},
              {"verification", to_json(d.verification)}};
}

json to_json(const MotResult& r) {
  json j{{"sense", std::string(to_string(r.sense))},
         {"value", num(r.value)},
         {"diagnostics", to_json(r.diagnostics)},
         {"hedge", to_json(r.hedge)}};
  if (!r.barriers.empty()) j["barriers"] = nums(r.barriers);
  return j;
}

json to_json(const Verdict& v) {
  return json{{"verdict", std::string(to_string(v.kind))},
              {"quoted", num(v.quoted)},
              {"lower", num(v.lower)},
              {"upper", num(v.upper)},
              {"edge", num(v.edge)},
              {"description", v.description}};
}

json to_json(const OrderReport& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"dates", json::array({p.date + 1, p.date + 2})},
                     {"worst_violation", num(p.worst_violation)},
                     {"worst_strike", num(p.worst_strike)}});
  }
  return json{{"admissible", r.admissible}, {"means_equal", r.means_equal}, {"max_mean_gap", num(r.max_mean_gap)}, {"pairs", pairs}};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "K,lower,upper,status\n";
  for (const auto& r : rows) {
    os << fmt(r.strike) << ',' << (r.ok ? fmt(r.lower) : "") << ',' << (r.ok ? fmt(r.upper) : "") << ','
       << (r.ok ? "ok" : "failed") << '\n';
  }
  return os.str();
}

std::string coupling_csv(const Coupling& c) {
  std::ostringstream os;
  for (std::size_t d = 0; d < c.dates(); ++d) os << 's' << d + 1 << ',';
  os << "mass\n";
  for (std::size_t k = 0; k < c.cells.size(); ++k) {
    for (double x : c.coordinates(k)) os << fmt(x) << ',';
    os << fmt(c.masses[k]) << '\n';
  }
  return os.str();
}

std::string surface_csv(const SemiStaticHedge& h, const Payoff& payoff, const std::vector<std::vector<double>>& grids) {
  if (grids.size() != 2) fail("surface export needs two dates");
  std::ostringstream os;
  os << "s1,s2,psi,phi,phi_minus_psi\n";
  for (double a : grids[0]) {
    for (double b : grids[1]) {
      const double s[2] = {a, b};
      double psi = h(s);
      double phi = payoff.evaluate(s);
      os << fmt(a) << ',' << fmt(b) << ',' << fmt(psi) << ',' << fmt(phi) << ',' << fmt(phi - psi) << '\n';
    }
  }
  return os.str();
}

std::string u2_csv(const TabulatedU2& u2) {
  std::ostringstream os;
  os << "s2,u2\n";
  for (std::size_t k = 0; k < u2.grid.size(); ++k) os << fmt(u2.grid[k]) << ',' << fmt(u2.values[k]) << '\n';
  return os.str();
}

TabulatedU2 u2_from_csv(const std::string& text) {
  auto rows = csv_rows(text);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r == 0 && is_header(rows[r])) continue;
    if (rows[r].size() != 2) fail("u2 rows need s2,u2");
    pts.emplace_back(number(rows[r][0]), number(rows[r][1]));
  }
  std::sort(pts.begin(), pts.end());
  TabulatedU2 u;
  for (const auto& [x, v] : pts) {
    if (!u.grid.empty() && x == u.grid.back()) fail("u2 grid repeats " + fmt(x));
    u.grid.push_back(x);
    u.values.push_back(v);
  }
  if (u.grid.size() < 2) fail("u2 needs at least two points");
  return u;
}

}  // namespace motbound::io
