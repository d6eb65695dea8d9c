// schmidtbound: Schmidt-number lower bounds from degenerating loci.
//
//   schmidtbound analyze <file> [--t T] [--samples N] [--restarts K] [--seed S] [--json]
//   schmidtbound generic --m M --r R [--json]
//   schmidtbound schmidt <file> [--json]
//   schmidtbound experiment --m M --r R --trials N --target B --seed S --out FILE
//                           [--format csv|json] [--json]
//   schmidtbound example3 --a A --b B --c C --d D [--json]
//
// Exit status: 0 on success, 2 on invalid input, 1 on internal failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "schmidt/bounds.hpp"
#include "schmidt/error.hpp"
#include "schmidt/experiments.hpp"
#include "schmidt/io.hpp"

namespace {

using namespace schmidt;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidInput, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// "re" or "re,im"
Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {re, 0.0};
    }
    const std::string re_s = text.substr(0, comma);
    const std::string im_s = text.substr(comma + 1);
    const double re = std::stod(re_s, &used);
    if (used != re_s.size()) throw std::invalid_argument(text);
    const double im = std::stod(im_s, &used);
    if (used != im_s.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::logic_error&) {
    fail(ErrorCode::InvalidInput, "cannot parse complex number \"" + text + "\" (use re or re,im)");
  }
}

std::string fmt(double x, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

void print_report(const BoundReport& rep) {
  std::cout << "state: " << rep.m << "x" << rep.n << ", rank " << rep.r << "\n";
  for (const auto& e : rep.chain) {
    std::cout << "  t=" << e.t << " (level " << e.k << ", side " << to_string(e.side)
              << "): " << to_string(e.verdict) << ", evidence " << fmt(e.evidence)
              << ", min rank found " << e.min_rank_found;
    if (is_empty(e.verdict)) std::cout << " -> bound " << e.bound_if_empty;
    std::cout << "\n";
  }
  std::cout << "certified bound: " << rep.certified_bound << " (" << to_string(rep.provenance)
            << "; exact entries alone give " << rep.exact_bound << ")\n";
  std::cout << "generic bound for this rank: " << rep.generic_bound;
  if (rep.generic_t) std::cout << " (t = " << *rep.generic_t << ")";
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schmidt-number lower bounds for bipartite mixed states"};
  app.require_subcommand(1);
  bool as_json = false;

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Certify a Schmidt-number lower bound for a state file");
  std::string analyze_file;
  int analyze_t = 0;
  ProbeConfig cfg;
  analyze_cmd->add_option("file", analyze_file, "State file (JSON)")->required();
  analyze_cmd->add_option("--t", analyze_t, "Probe only this t (m gives the exact entries alone)");
  analyze_cmd->add_option("--samples", cfg.samples, "Random directions per family")->capture_default_str();
  analyze_cmd->add_option("--restarts", cfg.restarts, "Local descents per level")->capture_default_str();
  analyze_cmd->add_option("--seed", cfg.seed, "Probe seed")->capture_default_str();
  analyze_cmd->add_flag("--json", as_json, "Print a JSON report");

  // generic
  auto* generic_cmd = app.add_subcommand("generic", "Generic bounds for rank r states on C^m (x) C^m");
  int gm = 0;
  int gr = 0;
  generic_cmd->add_option("--m", gm, "Local dimension")->required();
  generic_cmd->add_option("--r", gr, "Rank")->required();
  generic_cmd->add_flag("--json", as_json, "Print JSON");

  // schmidt
  auto* schmidt_cmd = app.add_subcommand("schmidt", "Schmidt ranks of the pure states in a state file");
  std::string schmidt_file;
  schmidt_cmd->add_option("file", schmidt_file, "State file (JSON)")->required();
  schmidt_cmd->add_flag("--json", as_json, "Print JSON");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "Certify bounds on random rank r states");
  int em = 0;
  int er = 0;
  int trials = 0;
  int target = 2;
  std::uint64_t exp_seed = 0;
  std::string out_path;
  std::string format = "csv";
  unsigned threads = 0;
  exp_cmd->add_option("--m", em, "Local dimension")->required();
  exp_cmd->add_option("--r", er, "Rank")->required();
  exp_cmd->add_option("--trials", trials, "Number of random states")->required();
  exp_cmd->add_option("--target", target, "Bound counted as a success")->capture_default_str();
  exp_cmd->add_option("--seed", exp_seed, "Experiment seed")->capture_default_str();
  exp_cmd->add_option("--out", out_path, "Write per-trial records here");
  exp_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  exp_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  exp_cmd->add_flag("--json", as_json, "Print the summary as JSON");

  // example3
  auto* ex3_cmd = app.add_subcommand("example3", "Product vectors spanning a 3-dimensional subspace of C^2 (x) C^2");
  std::string sa, sb, sc, sd;
  ex3_cmd->add_option("--a", sa, "Coefficient of |11> (re or re,im)")->required();
  ex3_cmd->add_option("--b", sb, "Coefficient of |12>")->required();
  ex3_cmd->add_option("--c", sc, "Coefficient of |21>")->required();
  ex3_cmd->add_option("--d", sd, "Coefficient of |22>")->required();
  ex3_cmd->add_flag("--json", as_json, "Print JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*analyze_cmd) {
      const auto state = io::parse_state_file(read_file(analyze_file));
      AnalyzeOptions opts;
      if (analyze_cmd->count("--t")) opts.only_t = analyze_t;
      const auto rep = analyze(state, cfg, {}, opts);
      if (as_json)
        std::cout << io::report_to_json(rep).dump(2) << "\n";
      else
        print_report(rep);
    } else if (*generic_cmd) {
      const auto j = io::generic_to_json(gm, gr);
      if (as_json) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "m=" << gm << ", r=" << gr << "\n";
        if (j["t_star"].is_null())
          std::cout << "optimal t: none (no t meets the codimension condition)\n";
        else
          std::cout << "optimal t: " << j["t_star"].get<int>() << "\n";
        std::cout << "optimal generic bound: " << j["bound"].get<int>() << "\n";
        for (const auto& c : j["cases"])
          std::cout << "  case " << c["case"].get<int>() << ": "
                    << (c["applicable"].get<bool>() ? "applicable, bound " + std::to_string(c["bound"].get<int>())
                                                    : std::string("not applicable"))
                    << "\n";
      }
    } else if (*schmidt_cmd) {
      const auto state = io::parse_state_file(read_file(schmidt_file));
      const auto j = io::schmidt_to_json(state);
      if (as_json) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::size_t i = 0;
        for (const auto& mem : j["members"])
          std::cout << "member " << i++ << ": weight " << fmt(mem["weight"].get<double>(), 6)
                    << ", Schmidt rank " << mem["schmidt_rank"].get<int>() << "\n";
      }
    } else if (*exp_cmd) {
      ProbeConfig exp_cfg;
      const auto summary = run_generic_experiment(em, er, trials, target, exp_cfg, exp_seed, threads);
      if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) fail(ErrorCode::InvalidInput, "cannot write " + out_path);
        out << export_summary(summary, format == "json" ? ExportFormat::Json : ExportFormat::Csv);
      }
      if (as_json) {
        nlohmann::json j{{"m", em}, {"r", er}, {"trials", trials}, {"target_bound", target},
                         {"seed", exp_seed}, {"success_fraction", summary.success_fraction}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "m=" << em << ", r=" << er << ", trials=" << trials << ", target bound " << target
                  << "\nsuccess fraction: " << fmt(summary.success_fraction, 6) << "\n";
        if (!out_path.empty()) std::cout << "records written to " << out_path << "\n";
      }
    } else if (*ex3_cmd) {
      const auto res = example3_subspace(parse_complex(sa), parse_complex(sb), parse_complex(sc),
                                         parse_complex(sd));
      const auto j = io::example3_to_json(res);
      if (as_json) {
        std::cout << j.dump(2) << "\n";
      } else {
        const auto& ck = res.checks;
        std::cout << "Schmidt ranks: " << ck.schmidt_ranks[0] << " " << ck.schmidt_ranks[1] << " "
                  << ck.schmidt_ranks[2] << "\nspan rank: " << ck.span_rank
                  << "\nmax orthogonality residual: "
                  << fmt(std::max({ck.orthogonality_residuals[0], ck.orthogonality_residuals[1],
                                   ck.orthogonality_residuals[2]}))
                  << "\nchecks: " << (ck.passed ? "pass" : "FAIL") << "\n";
      }
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return e.is_input_error() ? kExitInvalid : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
