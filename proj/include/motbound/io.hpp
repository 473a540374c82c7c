#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "motbound/coupling.hpp"
#include "motbound/envelope.hpp"
#include "motbound/hedge.hpp"
#include "motbound/lp.hpp"
#include "motbound/measures.hpp"
#include "motbound/mot.hpp"
#include "motbound/payoff.hpp"

namespace motbound::io {

using nlohmann::json;

// All I/O and parse failures throw Error(ErrorKind::invalid_input).

/// %.12g
std::string fmt(double x);
/// x rounded to 12 significant digits, for JSON output.
double round12(double x);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);
std::string dump(const json& j);

/// CSV with header maturity_index,strike,price or JSON [{i, K, C}, ...];
/// chosen by extension. Curves come back sorted by maturity and strike.
std::vector<CallCurve> read_quotes(const std::string& path);
std::vector<CallCurve> quotes_from_csv(const std::string& text);
std::vector<CallCurve> quotes_from_json(const json& j);

/// {points, weights, mean}
json to_json(const DiscreteMeasure& mu);
/// Atom form {points, weights}, or density form
/// {density: [{lo, hi, coeffs: [c0, c1, ...]}, ...], m, binning}
/// with the density c0 + c1 x + ... on each piece.
DiscreteMeasure measure_from_json(const json& j);
DiscreteMeasure read_measure(const std::string& path);

/// {kind, n, params: {strike}}; kind "tabulated" also takes
/// {grids, values} or {csv: path}.
Payoff payoff_from_json(const json& j);
/// "straddle", "negated_straddle", "forward_start_call:K", "asian_call:n:K",
/// "lookback_call:n:K", a path to a .json spec or a .csv table.
Payoff parse_payoff(const std::string& spec);
/// Columns s_1..s_n,value over a full grid product.
Payoff tabulated_payoff_from_csv(const std::string& text);

json to_json(const LinearProgram& lp);
LinearProgram lp_from_json(const json& j);

json to_json(const CallPortfolio& p);
json to_json(const SemiStaticHedge& h);
json to_json(const VerificationReport& r);
json to_json(const MotDiagnostics& d);
json to_json(const MotResult& r);
json to_json(const Verdict& v);
json to_json(const OrderReport& r);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string coupling_csv(const Coupling& c);
/// s1,s2,psi,phi,phi_minus_psi over the grid product.
std::string surface_csv(const SemiStaticHedge& h, const Payoff& payoff,
                        const std::vector<std::vector<double>>& grids);
std::string u2_csv(const TabulatedU2& u2);
TabulatedU2 u2_from_csv(const std::string& text);

}  // namespace motbound::io
