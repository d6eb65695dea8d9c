#pragma once

// Schmidt-number lower bounds from empty degenerating loci.
//
// For a state on C^m (x) C^m of rank r: if the level m - t locus is empty,
// the Schmidt number is at least m / (r - m + t). Bounds are reported as the
// integer ceiling since Schmidt numbers are integers.

#include <optional>
#include <string>
#include <vector>

#include "schmidt/locus.hpp"
#include "schmidt/states.hpp"

namespace schmidt {

/// ceil(m / (r - m + t)). Requires 1 <= t <= m and r - m + t >= 1.
int theorem2_bound(int m, int r, int t);

/// t * (r - m + t) >= m: codimension of the rank <= m - t locus of a generic
/// family reaches m, so the locus is empty in CP^{m-1}.
bool generic_t_condition(int m, int r, int t);

struct GenericBound {
  std::optional<int> t_star;
  int bound = 1;
};

/// Smallest t in [max(1, m - r + 1), m] meeting the codimension condition,
/// and the bound it yields. No qualifying t gives bound 1.
GenericBound optimal_generic_bound(int m, int r);

enum class GenericCase { SqrtBelowRank = 1, SqrtAboveRank = 2, Three = 3, Two = 4 };

struct CaseBound {
  GenericCase id;
  bool applicable;
  int bound;
};

/// The four closed-form generic bounds for rank r on C^m (x) C^m:
///   1) [sqrt m] - 1                      if r <= m
///   2) ceil(m / (r - m + [sqrt m] + 1))  if r > m
///   3) 3                                  if 3m/2 - 5 >= r > m >= 169
///   4) 2                                  if r <= 2m - 3
/// [x] is the integer part.
std::vector<CaseBound> theorem1_case_bounds(int m, int r);

/// Integer square root (floor).
int isqrt(int x);

enum class Side { A, B };

const char* to_string(Side side);

struct ChainEntry {
  int t = 0;
  int k = 0;  // locus level m - t
  Side side = Side::A;
  Verdict verdict = Verdict::Inconclusive;
  double evidence = 0.0;
  int min_rank_found = 0;
  int bound_if_empty = 1;
};

enum class Provenance { None, Exact, Probabilistic };

const char* to_string(Provenance p);

struct BoundReport {
  int m = 0;
  int n = 0;
  int r = 0;
  int certified_bound = 1;
  /// Best bound supported by exact entries alone.
  int exact_bound = 1;
  Provenance provenance = Provenance::None;
  std::vector<ChainEntry> chain;
  int generic_bound = 1;
  std::optional<int> generic_t;
  RankPolicy policy;
  ProbeConfig config;
};

struct AnalyzeOptions {
  /// Probe only this t (t = m selects the exact entries alone).
  std::optional<int> only_t;
};

/// Runs the exact level-0 tests on both sides (t = m) and probabilistic
/// level m - t tests on the A side for t_star <= t < m, then takes the best
/// bound over empty entries. Requires m == n.
BoundReport analyze(const EnsembleState& e, const ProbeConfig& cfg = {},
                    const RankPolicy& policy = {}, const AnalyzeOptions& options = {});

}  // namespace schmidt
