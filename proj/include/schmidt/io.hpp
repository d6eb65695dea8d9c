#pragma once

// JSON state files and machine-readable reports for the command line tool.
//
// State file:
//   { "m": M, "n": N,
//     "ensemble": [ { "weight": w, "coefficients": [[[re, im], ...N], ...M] }, ... ] }
// or
//   { "m": M, "n": N, "rho": [[[re, im], ...M*N], ...M*N] }
//
// Exactly one of "ensemble" / "rho" is present. Errors carry the JSON path
// of the offending value, e.g. "$.ensemble[1].weight".

#include <string>
#include <string_view>

#include <json.hpp>

#include "schmidt/bounds.hpp"
#include "schmidt/experiments.hpp"
#include "schmidt/states.hpp"

namespace schmidt::io {

/// Weights are renormalized when their sum lies in [0.999, 1.001];
/// coefficient vectors when their norm is within 1e-6 of 1.
EnsembleState parse_state_file(std::string_view text, const RankPolicy& policy = {});

/// Ensemble form, numbers printed with 17 significant digits.
std::string write_state_file(const EnsembleState& e);
std::string write_density_file(const ComplexMatrix& rho, int m, int n);

nlohmann::json complex_to_json(Complex z);

nlohmann::json report_to_json(const BoundReport& report);
nlohmann::json generic_to_json(int m, int r);
nlohmann::json schmidt_to_json(const EnsembleState& e, const RankPolicy& policy = {});
nlohmann::json example3_to_json(const Example3Result& res);

}  // namespace schmidt::io
