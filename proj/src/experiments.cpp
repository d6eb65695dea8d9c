#include "schmidt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "schmidt/error.hpp"

namespace schmidt {

using nlohmann::json;

std::uint64_t trial_seed(std::uint64_t seed, int trial_index) {
  auto stream = RandomStream::derive(seed, 0x5eed0000ULL + std::uint64_t(trial_index));
  return static_cast<std::uint64_t>(stream.uniform() * 9007199254740992.0);  // 2^53
}

namespace {

TrialRecord run_trial(int m, int r, int index, const ProbeConfig& base, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.trial_index = index;
  rec.seed = trial_seed(seed, index);

  ProbeConfig cfg = base;
  cfg.seed = rec.seed;
  const auto state = random_rank_r_state(m, m, r, rec.seed);
  const auto report = analyze(state, cfg);
  rec.certified_bound = report.certified_bound;
  for (const auto& entry : report.chain)
    if (entry.side == Side::A) rec.probes.push_back({entry.t, entry.min_rank_found});

  rec.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

ExperimentSummary run_generic_experiment(int m, int r, int trials, int target_bound,
                                         const ProbeConfig& cfg, std::uint64_t seed,
                                         unsigned threads) {
  require(m >= 2, "experiment: m must be at least 2");
  require(r >= 1 && r <= 2 * m - 3, "experiment: r must lie in [1, 2m - 3]");
  require(trials >= 1, "experiment: trials must be at least 1");
  require(target_bound >= 1, "experiment: target bound must be at least 1");
  cfg.validate();

  ExperimentSummary summary;
  summary.m = m;
  summary.r = r;
  summary.trials = trials;
  summary.target_bound = target_bound;
  summary.seed = seed;
  summary.records.resize(std::size_t(trials));

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, unsigned(trials));

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < trials; i = next++) {
      try {
        summary.records[std::size_t(i)] = run_trial(m, r, i, cfg, seed);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  const auto hits = std::count_if(summary.records.begin(), summary.records.end(),
                                  [&](const TrialRecord& rec) {
                                    return rec.certified_bound >= target_bound;
                                  });
  summary.success_fraction = double(hits) / double(trials);
  return summary;
}

Example3Result example3_subspace(Complex a, Complex b, Complex c, Complex d) {
  constexpr double kTol = 1e-12;
  if (std::abs(d) <= kTol) fail(ErrorCode::InvalidInput, "example3: degenerate normal vector (d=0)");
  if (std::abs(a * d - b * c) <= kTol)
    fail(ErrorCode::InvalidInput, "example3: degenerate normal vector (ad=bc)");

  // Amplitude order |11>, |12>, |21>, |22>.
  auto make = [](Complex x11, Complex x12, Complex x21, Complex x22) {
    ComplexVector v(4);
    v << x11, x12, x21, x22;
    return PureState::normalized(2, 2, v);
  };
  Example3Result res{
      make(-c, 0.0, a, 0.0),
      make(0.0, -d, 0.0, b),
      make(-(c + d), -(c + d), a + b, a + b),
      {},
  };

  ComplexVector normal(4);
  normal << a, b, c, d;
  const std::array<const PureState*, 3> vs{&res.v1, &res.v2, &res.v3};
  auto& ck = res.checks;
  bool ok = true;
  for (std::size_t i = 0; i < 3; ++i) {
    const ComplexMatrix coeffs = coefficient_matrix(*vs[i]);
    ck.schmidt_ranks[i] = schmidt_rank(*vs[i]).rank;
    ck.product_residuals[i] = std::abs(coeffs.determinant());
    ck.orthogonality_residuals[i] = std::abs((normal.array() * vs[i]->amplitudes().array()).sum());
    ok = ok && ck.schmidt_ranks[i] == 1 && ck.product_residuals[i] <= kTol &&
         ck.orthogonality_residuals[i] <= 1e-10;
  }
  const std::vector<ComplexVector> span{res.v1.amplitudes(), res.v2.amplitudes(),
                                        res.v3.amplitudes()};
  ck.span_rank = numerical_rank(stack_columns(span));
  ck.passed = ok && ck.span_rank == 3;
  return res;
}

namespace {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(const ExperimentSummary& s) {
  json records = json::array();
  for (const auto& rec : s.records) {
    json probes = json::array();
    for (const auto& p : rec.probes) probes.push_back({{"t", p.t}, {"min_rank_found", p.min_rank_found}});
    records.push_back({{"trial_index", rec.trial_index},
                       {"seed", rec.seed},
                       {"certified_bound", rec.certified_bound},
                       {"probes", probes},
                       {"elapsed_ms", rec.elapsed_ms}});
  }
  return {{"m", s.m},
          {"r", s.r},
          {"trials", s.trials},
          {"target_bound", s.target_bound},
          {"seed", s.seed},
          {"success_fraction", s.success_fraction},
          {"records", records}};
}

}  // namespace

std::string export_summary(const ExperimentSummary& s, ExportFormat format) {
  if (format == ExportFormat::Json) return to_json(s).dump(2) + "\n";

  std::ostringstream out;
  out << "trial_index,seed,certified_bound,probed_t,min_rank_found,elapsed_ms\n";
  for (const auto& rec : s.records) {
    std::string ts;
    std::string ranks;
    for (std::size_t i = 0; i < rec.probes.size(); ++i) {
      if (i) {
        ts += ';';
        ranks += ';';
      }
      ts += std::to_string(rec.probes[i].t);
      ranks += std::to_string(rec.probes[i].min_rank_found);
    }
    out << rec.trial_index << ',' << rec.seed << ',' << rec.certified_bound << ',' << ts << ','
        << ranks << ',' << format_real(rec.elapsed_ms) << '\n';
  }
  return out.str();
}

ExperimentSummary summary_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ExperimentSummary s;
    s.m = j.at("m").get<int>();
    s.r = j.at("r").get<int>();
    s.trials = j.at("trials").get<int>();
    s.target_bound = j.at("target_bound").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.success_fraction = j.at("success_fraction").get<double>();
    for (const auto& jr : j.at("records")) {
      TrialRecord rec;
      rec.trial_index = jr.at("trial_index").get<int>();
      rec.seed = jr.at("seed").get<std::uint64_t>();
      rec.certified_bound = jr.at("certified_bound").get<int>();
      rec.elapsed_ms = jr.at("elapsed_ms").get<double>();
      for (const auto& jp : jr.at("probes"))
        rec.probes.push_back({jp.at("t").get<int>(), jp.at("min_rank_found").get<int>()});
      s.records.push_back(std::move(rec));
    }
    return s;
  } catch (const json::exception& ex) {
    fail(ErrorCode::InvalidInput, std::string("experiment summary: ") + ex.what());
  }
}

}  // namespace schmidt
