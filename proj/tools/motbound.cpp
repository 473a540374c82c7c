#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "motbound/envelope.hpp"
#include "motbound/error.hpp"
#include "motbound/hedge.hpp"
#include "motbound/io.hpp"
#include "motbound/kernels.hpp"
#include "motbound/lp.hpp"
#include "motbound/mot.hpp"

using namespace motbound;
using io::json;

namespace {

struct Config {
  std::vector<std::string> marginals;
  std::string quotes;
  std::string payoff = "straddle";
  std::string sense = "both";
  std::string strikes = "0.5:1.5:0.1";
  std::string out;
  std::string coupling_out;
  std::string dump_lp;
  std::string u2;
  std::string lp;
  int grid = 0;
  double tol_feas = 1e-9;
  double tol_gap = kVerifyTolerance;
  double s0 = std::nan("");
  double quoted = 0.0;
  std::uint64_t seed = 1;
  int iters = 50;
  int blocks = 5;
  int per_block = 16;
  bool decompose = false;
  bool exact = false;
};

MotOptions options(const Config& c) {
  MotOptions o;
  o.lp.feasibility_tol = c.tol_feas;
  o.verify_tolerance = c.tol_gap;
  return o;
}

MarginalSystem load_marginals(const Config& c) {
  if (c.marginals.size() < 2) throw Error(ErrorKind::invalid_input, "--marginals needs at least two files");
  std::vector<DiscreteMeasure> mus;
  for (const auto& path : c.marginals) {
    json j = io::read_json(path);
    if (c.grid > 0 && j.is_object() && j.contains("density")) j["m"] = c.grid;
    try {
      mus.push_back(io::measure_from_json(j));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::invalid_input, path + ": " + e.what());
    }
  }
  return MarginalSystem(std::move(mus));
}

std::vector<double> parse_strikes(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    auto a = spec.find(':');
    auto b = spec.find(':', a + 1);
    if (b == std::string::npos) throw Error(ErrorKind::invalid_input, "strike range is lo:hi:step");
    double lo = std::stod(spec.substr(0, a));
    double hi = std::stod(spec.substr(a + 1, b - a - 1));
    double step = std::stod(spec.substr(b + 1));
    if (!(step > 0.0) || hi < lo) throw Error(ErrorKind::invalid_input, "strike range needs lo <= hi and step > 0");
    const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(io::round12(lo + static_cast<double>(k) * step));
  } else {
    std::string cell;
    std::istringstream is(spec);
    while (std::getline(is, cell, ',')) out.push_back(std::stod(cell));
  }
  if (out.empty()) throw Error(ErrorKind::invalid_input, "no strikes");
  return out;
}

MotResult solve_one(const MotProblem& p, const Config& c) {
  return c.decompose ? decompose_and_solve(p, options(c)) : bound(p, options(c));
}

int cmd_implied(const Config& c) {
  auto curves = io::read_quotes(c.quotes);
  std::vector<DiscreteMeasure> mus;
  for (const auto& curve : curves) {
    double s0 = c.s0;
    if (std::isnan(s0)) s0 = curves.front().quotes.front().price + curves.front().quotes.front().strike;
    mus.push_back(from_call_curve(curve, s0));
  }
  json arr = json::array();
  for (std::size_t i = 0; i < mus.size(); ++i) {
    json m = io::to_json(mus[i]);
    m["maturity_index"] = curves[i].maturity_index;
    if (!c.out.empty()) io::write_json(c.out + "/marginal_" + std::to_string(curves[i].maturity_index) + ".json", m);
    arr.push_back(m);
  }
  json result{{"marginals", arr}};
  if (mus.size() >= 2) result["order"] = io::to_json(convex_order_report(mus));
  std::cout << io::dump(result);
  return 0;
}

int cmd_check_order(const Config& c) {
  auto sys = load_marginals(c);
  std::cout << io::dump(io::to_json(sys.order_report()));
  if (!sys.admissible()) {
    for (const auto& p : sys.order_report().pairs) {
      if (p.worst_violation > kOrderTolerance) {
        std::cerr << "NotAdmissible: dates " << p.date + 1 << "-" << p.date + 2 << " violate convex order by "
                  << io::fmt(p.worst_violation) << " at strike " << io::fmt(p.worst_strike) << "\n";
      }
    }
    if (!sys.order_report().means_equal) {
      std::cerr << "NotAdmissible: means differ by " << io::fmt(sys.order_report().max_mean_gap) << "\n";
    }
    return 1;
  }
  return 0;
}

int cmd_bounds(const Config& c) {
  auto sys = load_marginals(c);
  Payoff payoff = io::parse_payoff(c.payoff);
  std::vector<BoundSense> senses;
  if (c.sense == "both") {
    senses = {BoundSense::lower, BoundSense::upper};
  } else {
    senses = {bound_sense_from_string(c.sense)};
  }
  json out{{"payoff", c.payoff}};
  for (auto s : senses) {
    MotProblem p{sys, payoff, s};
    if (!c.dump_lp.empty()) {
      io::write_json(c.dump_lp + "." + std::string(to_string(s)) + ".json", io::to_json(build_lp(p, options(c)).lp));
    }
    MotResult r = solve_one(p, c);
    out[std::string(to_string(s))] = io::to_json(r);
    if (!c.coupling_out.empty()) {
      io::write_text(c.coupling_out + "." + std::string(to_string(s)) + ".csv", io::coupling_csv(r.coupling));
    }
  }
  if (c.out.empty()) {
    std::cout << io::dump(out);
  } else {
    io::write_json(c.out, out);
    for (auto s : senses) {
      std::cout << to_string(s) << " " << io::fmt(out[std::string(to_string(s))]["value"].get<double>()) << "\n";
    }
  }
  return 0;
}

int cmd_sweep(const Config& c) {
  auto sys = load_marginals(c);
  auto rows = strike_sweep(sys, parse_strikes(c.strikes), options(c));
  io::write_text(c.out, io::sweep_csv(rows));
  for (const auto& r : rows) {
    if (!r.ok) std::cerr << "strike " << io::fmt(r.strike) << ": " << r.error << "\n";
  }
  return 0;
}

int cmd_surface(const Config& c) {
  auto sys = load_marginals(c);
  Payoff payoff = io::parse_payoff(c.payoff);
  auto s = c.sense == "both" ? BoundSense::lower : bound_sense_from_string(c.sense);
  MotResult r = solve_one(MotProblem{sys, payoff, s}, c);
  io::write_text(c.out, io::surface_csv(r.hedge, payoff, verification_grids(sys)));
  return 0;
}

int cmd_envelope(const Config& c) {
  auto sys = load_marginals(c);
  if (sys.dates() != 2) throw Error(ErrorKind::dimension_mismatch, "envelope needs two marginals");
  Payoff payoff = io::parse_payoff(c.payoff);
  MotResult lp = bound(MotProblem{sys, payoff, BoundSense::lower}, options(c));
  TabulatedU2 start =
      c.u2.empty() ? tabulate_u2(lp.hedge.statics[1], sys[0], sys[1]) : io::u2_from_csv(io::read_text(c.u2));
  double initial = dual_value(start, payoff, sys[0], sys[1]);
  EnvelopeDual best = improve_u2(start, payoff, sys[0], sys[1], c.iters);
  json out{{"initial_value", io::round12(initial)},
           {"value", io::round12(best.value)},
           {"sweeps", best.sweeps},
           {"lp_lower", io::round12(lp.value)},
           {"gap_to_lp", io::round12(lp.value - best.value)}};
  if (!c.out.empty()) io::write_text(c.out, io::u2_csv(best.u2));
  std::cout << io::dump(out);
  return 0;
}

int cmd_arb(const Config& c) {
  auto sys = load_marginals(c);
  Payoff payoff = io::parse_payoff(c.payoff);
  MotResult lo = solve_one(MotProblem{sys, payoff, BoundSense::lower}, c);
  MotResult hi = solve_one(MotProblem{sys, payoff, BoundSense::upper}, c);
  Verdict v = check_arbitrage(c.quoted, lo.value, hi.value);
  json out = io::to_json(v);
  if (v.kind == VerdictKind::buy) out["hedge"] = io::to_json(lo.hedge);
  if (v.kind == VerdictKind::sell) out["hedge"] = io::to_json(hi.hedge);
  if (c.out.empty()) {
    std::cout << io::dump(out);
  } else {
    io::write_json(c.out, out);
    std::cout << to_string(v.kind) << "\n";
  }
  return 0;
}

int cmd_counterexample(const Config& c) {
  if (c.blocks < 1 || c.per_block < 1) throw Error(ErrorKind::invalid_input, "--blocks and --per-block must be >= 1");
  auto sys = counterexample_marginals(c.blocks, c.per_block);
  MotProblem p{sys, Payoff::negated_straddle(), BoundSense::lower};
  MotResult r = decompose_and_solve(p, options(c));
  auto inc = delta_increments(r.hedge, sys[0]);
  // block length = 2 w
  double closed = 0.0;
  for (double w : sys[0].weights()) closed -= (2.0 * w) * (2.0 * w) / 8.0;
  json out{{"blocks", c.blocks},
           {"atoms_per_block", c.per_block},
           {"value", io::round12(r.value)},
           {"closed_form", io::round12(closed)},
           {"barriers", json::array()},
           {"delta_at_atoms", json::array()},
           {"delta_increments", json::array()},
           {"min_increment", io::round12(inc.min_increment())},
           {"hedge_source", r.diagnostics.hedge_source},
           {"diagnostics", io::to_json(r.diagnostics)}};
  for (double b : r.barriers) out["barriers"].push_back(io::round12(b));
  for (double d : inc.deltas) out["delta_at_atoms"].push_back(io::round12(d));
  for (double d : inc.increments) out["delta_increments"].push_back(io::round12(d));
  if (!c.out.empty()) io::write_text(c.out, io::coupling_csv(r.coupling));
  std::cout << io::dump(out);
  return 0;
}

int cmd_coupling(const Config& c) {
  auto sys = load_marginals(c);
  io::write_text(c.out, io::coupling_csv(random_feasible_coupling(sys, c.seed, options(c))));
  return 0;
}

int cmd_lp(const Config& c) {
  LinearProgram lp = io::lp_from_json(io::read_json(c.lp));
  LpSolution s = c.exact ? solve_exact(lp) : solve(lp);
  json out{{"status", std::string(to_string(s.status))}, {"iterations", s.iterations}};
  if (s.optimal()) {
    out["objective"] = io::round12(s.objective);
    out["dual_objective"] = io::round12(s.dual_objective);
    if (!s.exact_objective.empty()) out["exact_objective"] = s.exact_objective;
    out["redundant_rows"] = s.redundant_rows;
  }
  std::cout << io::dump(out);
  return s.optimal() ? 0 : 1;
}

void apply_thread_cap() {
  if (const char* env = std::getenv("MOTBOUND_THREADS")) {
    int n = std::atoi(env);
    if (n < 1) throw Error(ErrorKind::invalid_input, "MOTBOUND_THREADS must be a positive integer");
    kernels::set_max_threads(n);
    omp_set_num_threads(n);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-independent price bounds from martingale optimal transport"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* sub, bool payoff) {
    sub->add_option("--marginals", c.marginals, "Marginal JSON files, one per date")->required();
    if (payoff) sub->add_option("--payoff", c.payoff, "Payoff shorthand, JSON spec or CSV table");
    sub->add_option("--grid", c.grid, "Atom count for density-form marginals")->check(CLI::Range(2, 100000));
    sub->add_option("--tol-feas", c.tol_feas, "LP feasibility tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-gap", c.tol_gap, "Hedge verification tolerance")->check(CLI::PositiveNumber);
  };

  auto* implied = app.add_subcommand("implied-marginals", "Call quotes to marginal JSON files");
  implied->add_option("--quotes", c.quotes, "Quotes CSV or JSON")->required();
  implied->add_option("--s0", c.s0, "Spot; defaults to C(K0) + K0 of the first maturity");
  implied->add_option("--out", c.out, "Directory for marginal_<i>.json");

  auto* order = app.add_subcommand("check-order", "Convex-order report");
  common(order, false);

  auto* bounds = app.add_subcommand("bounds", "Bounds, hedges and diagnostics as JSON");
  common(bounds, true);
  bounds->add_option("--sense", c.sense, "lower, upper or both")->check(CLI::IsMember({"lower", "upper", "both"}));
  bounds->add_option("--out", c.out, "Output JSON path");
  bounds->add_option("--coupling", c.coupling_out, "Prefix for optimal coupling CSVs");
  bounds->add_option("--dump-lp", c.dump_lp, "Prefix for LP JSON dumps");
  bounds->add_flag("--blocks", c.decompose, "Solve barrier blocks separately");

  auto* sweep = app.add_subcommand("sweep", "Forward-start call bounds over strikes as CSV");
  common(sweep, false);
  sweep->add_option("--strikes", c.strikes, "lo:hi:step or a comma list");
  sweep->add_option("--out", c.out, "Output CSV path");

  auto* surface = app.add_subcommand("surface", "Hedge and payoff over the verification grid as CSV");
  common(surface, true);
  surface->add_option("--sense", c.sense, "lower or upper")->check(CLI::IsMember({"lower", "upper", "both"}));
  surface->add_option("--out", c.out, "Output CSV path");
  surface->add_flag("--blocks", c.decompose, "Solve barrier blocks separately");

  auto* envelope = app.add_subcommand("envelope", "Convex-envelope dual value and ascent");
  common(envelope, true);
  envelope->add_option("--u2", c.u2, "Starting u2 CSV (s2,u2); defaults to the LP dual");
  envelope->add_option("--iters", c.iters, "Ascent sweeps")->check(CLI::NonNegativeNumber);
  envelope->add_option("--out", c.out, "Output CSV for the improved u2");

  auto* arb = app.add_subcommand("arb", "Arbitrage verdict for a quoted price");
  common(arb, true);
  arb->add_option("--quoted", c.quoted, "Quoted price")->required();
  arb->add_option("--out", c.out, "Output JSON path");
  arb->add_flag("--blocks", c.decompose, "Solve barrier blocks separately");

  auto* counter = app.add_subcommand("counterexample", "Barrier-block instance with decomposed solve");
  counter->add_option("--blocks", c.blocks, "Number of 1/n^2 blocks");
  counter->add_option("--per-block", c.per_block, "Atoms of mu2 per block");
  counter->add_option("--out", c.out, "Output CSV for the coupling");
  counter->add_option("--tol-feas", c.tol_feas, "LP feasibility tolerance")->check(CLI::PositiveNumber);

  auto* coupling = app.add_subcommand("coupling", "Random extreme martingale coupling as CSV");
  common(coupling, false);
  coupling->add_option("--seed", c.seed, "Seed for the random cost");
  coupling->add_option("--out", c.out, "Output CSV path");

  auto* lp = app.add_subcommand("lp", "Solve a dumped LP");
  lp->add_option("--lp", c.lp, "LP JSON")->required();
  lp->add_flag("--exact", c.exact, "Exact rational solve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    apply_thread_cap();
    if (*implied) return cmd_implied(c);
    if (*order) return cmd_check_order(c);
    if (*bounds) return cmd_bounds(c);
    if (*sweep) return cmd_sweep(c);
    if (*surface) return cmd_surface(c);
    if (*envelope) return cmd_envelope(c);
    if (*arb) return cmd_arb(c);
    if (*counter) return cmd_counterexample(c);
    if (*coupling) return cmd_coupling(c);
    if (*lp) return cmd_lp(c);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return is_domain_error(e.kind()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "InvalidInput: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
