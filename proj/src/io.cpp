#include "schmidt/io.hpp"

#include <cmath>
#include <string>

#include "schmidt/error.hpp"

namespace schmidt::io {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what,
                               ErrorCode code = ErrorCode::InvalidInput) {
  fail(code, path + ": " + what);
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& member(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, std::string("missing field \"") + key + "\"");
  return *it;
}

int positive_int(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 4096)
    schema_error(path, "expected a positive integer");
  return v.get<int>();
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema_error(path, "expected a finite number");
  return x;
}

Complex complex_value(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) schema_error(path, "expected a [re, im] pair");
  return {number(v[0], at(path, 0)), number(v[1], at(path, 1))};
}

ComplexMatrix complex_matrix(const json& v, const std::string& path, int rows, int cols) {
  if (!v.is_array()) schema_error(path, "expected an array of rows");
  if (v.size() != std::size_t(rows))
    schema_error(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(v.size()));
  ComplexMatrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = v[std::size_t(i)];
    const auto row_path = at(path, std::size_t(i));
    if (!row.is_array()) schema_error(row_path, "expected an array of [re, im] pairs");
    if (row.size() != std::size_t(cols))
      schema_error(row_path, "expected " + std::to_string(cols) + " entries, got " +
                                 std::to_string(row.size()));
    for (int j = 0; j < cols; ++j)
      out(i, j) = complex_value(row[std::size_t(j)], at(row_path, std::size_t(j)));
  }
  return out;
}

json matrix_to_json(const ComplexMatrix& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(complex_to_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

json policy_to_json(const RankPolicy& p) {
  return {{"relative_threshold", p.relative_threshold}, {"absolute_floor", p.absolute_floor}};
}

json config_to_json(const ProbeConfig& c) {
  return {{"samples", c.samples},         {"restarts", c.restarts},
          {"descent_steps", c.descent_steps}, {"step_tolerance", c.step_tolerance},
          {"emptiness_gap", c.emptiness_gap}, {"seed", c.seed}};
}

EnsembleState parse_ensemble(const json& list, int m, int n, const RankPolicy& policy) {
  const std::string path = "$.ensemble";
  if (!list.is_array() || list.empty()) schema_error(path, "expected a nonempty array");

  std::vector<Member> members;
  double total = 0.0;
  for (std::size_t l = 0; l < list.size(); ++l) {
    const auto& item = list[l];
    const auto item_path = at(path, l);
    if (!item.is_object()) schema_error(item_path, "expected an object");
    const double w = number(member(item, item_path, "weight"), item_path + ".weight");
    if (w <= 0.0) schema_error(item_path + ".weight", "weight must be positive (got " + std::to_string(w) + ")");
    const auto coeff_path = item_path + ".coefficients";
    const ComplexMatrix a = complex_matrix(member(item, item_path, "coefficients"), coeff_path, m, n);
    const double norm = a.norm();
    if (std::abs(norm - 1.0) > 1e-6)
      schema_error(coeff_path, "coefficients must have unit norm (got " + std::to_string(norm) + ")");
    members.push_back({w, PureState::from_coefficients(a / norm)});
    total += w;
  }
  if (total < 0.999 || total > 1.001)
    schema_error(path, "weights sum to " + std::to_string(total) + ", expected 1 within 0.001");
  for (auto& mem : members) mem.weight /= total;
  return EnsembleState(m, n, std::move(members), policy);
}

}  // namespace

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

EnsembleState parse_state_file(std::string_view text, const RankPolicy& policy) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    schema_error("$", std::string("not valid JSON: ") + ex.what());
  }
  if (!doc.is_object()) schema_error("$", "expected an object");
  const int m = positive_int(member(doc, "$", "m"), "$.m");
  const int n = positive_int(member(doc, "$", "n"), "$.n");

  const bool has_ensemble = doc.contains("ensemble");
  const bool has_rho = doc.contains("rho");
  if (has_ensemble == has_rho) schema_error("$", "exactly one of \"ensemble\" or \"rho\" is required");

  if (has_ensemble) return parse_ensemble(doc["ensemble"], m, n, policy);

  const ComplexMatrix rho = complex_matrix(doc["rho"], "$.rho", m * n, m * n);
  try {
    return from_density(rho, m, n, policy);
  } catch (const Error& ex) {
    schema_error("$.rho", ex.what(), ex.code());
  }
}

std::string write_state_file(const EnsembleState& e) {
  json list = json::array();
  for (const auto& mem : e.members())
    list.push_back({{"weight", mem.weight}, {"coefficients", matrix_to_json(coefficient_matrix(mem.state))}});
  return json{{"m", e.m()}, {"n", e.n()}, {"ensemble", list}}.dump(2) + "\n";
}

std::string write_density_file(const ComplexMatrix& rho, int m, int n) {
  return json{{"m", m}, {"n", n}, {"rho", matrix_to_json(rho)}}.dump(2) + "\n";
}

json report_to_json(const BoundReport& report) {
  json chain = json::array();
  for (const auto& e : report.chain) {
    chain.push_back({{"t", e.t},
                     {"k", e.k},
                     {"side", to_string(e.side)},
                     {"verdict", std::string(to_string(e.verdict))},
                     {"evidence", e.evidence},
                     {"min_rank_found", e.min_rank_found},
                     {"bound_if_empty", e.bound_if_empty}});
  }
  json out{{"m", report.m},
           {"n", report.n},
           {"r", report.r},
           {"certified_bound", report.certified_bound},
           {"exact_bound", report.exact_bound},
           {"provenance", to_string(report.provenance)},
           {"generic_bound", report.generic_bound},
           {"generic_t", nullptr},
           {"chain", chain},
           {"policy", policy_to_json(report.policy)},
           {"config", config_to_json(report.config)}};
  if (report.generic_t) out["generic_t"] = *report.generic_t;
  return out;
}

json generic_to_json(int m, int r) {
  const auto opt = optimal_generic_bound(m, r);
  json cases = json::array();
  for (const auto& c : theorem1_case_bounds(m, r))
    cases.push_back({{"case", static_cast<int>(c.id)}, {"applicable", c.applicable}, {"bound", c.bound}});
  json out{{"m", m}, {"r", r}, {"t_star", nullptr}, {"bound", opt.bound}, {"cases", cases}};
  if (opt.t_star) out["t_star"] = *opt.t_star;
  return out;
}

json schmidt_to_json(const EnsembleState& e, const RankPolicy& policy) {
  json members = json::array();
  for (const auto& mem : e.members()) {
    const auto info = schmidt_rank(mem.state, policy);
    json sv = json::array();
    for (Eigen::Index i = 0; i < info.singular_values.size(); ++i) sv.push_back(info.singular_values(i));
    members.push_back({{"weight", mem.weight}, {"schmidt_rank", info.rank}, {"singular_values", sv}});
  }
  return {{"m", e.m()}, {"n", e.n()}, {"members", members}};
}

json example3_to_json(const Example3Result& res) {
  const auto& ck = res.checks;
  return {{"vectors", json::array({vector_to_json(res.v1.amplitudes()),
                                   vector_to_json(res.v2.amplitudes()),
                                   vector_to_json(res.v3.amplitudes())})},
          {"schmidt_ranks", ck.schmidt_ranks},
          {"product_residuals", ck.product_residuals},
          {"span_rank", ck.span_rank},
          {"orthogonality_residuals", ck.orthogonality_residuals},
          {"passed", ck.passed}};
}

}  // namespace schmidt::io
