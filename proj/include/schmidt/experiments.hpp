#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "schmidt/bounds.hpp"

namespace schmidt {

struct ProbedLevel {
  int t = 0;
  int min_rank_found = 0;

  bool operator==(const ProbedLevel&) const = default;
};

struct TrialRecord {
  int trial_index = 0;
  std::uint64_t seed = 0;
  int certified_bound = 1;
  std::vector<ProbedLevel> probes;
  double elapsed_ms = 0.0;

  bool operator==(const TrialRecord&) const = default;
};

struct ExperimentSummary {
  int m = 0;
  int r = 0;
  int trials = 0;
  int target_bound = 0;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;
  double success_fraction = 0.0;

  bool operator==(const ExperimentSummary&) const = default;
};

/// Seed of trial i, independent of execution order.
std::uint64_t trial_seed(std::uint64_t seed, int trial_index);

/// Analyzes `trials` random rank-r states on C^m (x) C^m. Trials run on up
/// to `threads` workers (0 = hardware concurrency); the summary does not
/// depend on the thread count apart from elapsed_ms.
ExperimentSummary run_generic_experiment(int m, int r, int trials, int target_bound,
                                         const ProbeConfig& cfg, std::uint64_t seed,
                                         unsigned threads = 0);

struct Example3Checks {
  std::array<int, 3> schmidt_ranks{};
  std::array<double, 3> product_residuals{};  // |det| of each 2x2 coefficient matrix
  int span_rank = 0;
  std::array<double, 3> orthogonality_residuals{};
  bool passed = false;
};

struct Example3Result {
  PureState v1;
  PureState v2;
  PureState v3;
  Example3Checks checks;
};

/// Three product vectors spanning the complement of a|11>+b|12>+c|21>+d|22>
/// in C^2 (x) C^2 (orthogonal under the bilinear pairing sum_i x_i y_i).
/// Rejects d = 0 and ad = bc (tolerance 1e-12).
Example3Result example3_subspace(Complex a, Complex b, Complex c, Complex d);

enum class ExportFormat { Csv, Json };

std::string export_summary(const ExperimentSummary& s, ExportFormat format);

ExperimentSummary summary_from_json(const std::string& text);

}  // namespace schmidt
