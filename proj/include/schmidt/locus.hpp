#pragma once

// Degenerating loci of a mixed state on the A side.
//
// Given a range basis v_1..v_s, block w of the family is the n x s matrix
// B_w(j, l) = <wj|v_l>. For a direction r in CP^{m-1} the pencil is
// P(r) = sum_w r_w B_w, and the level-k locus is the set of directions with
// rank P(r) <= k. It depends only on the range of the state.
//
// Level 0 is decided exactly: P(r) = 0 for some r != 0 iff the m rows
// vec(B_w)^T are linearly dependent. Higher levels are probed: random
// directions followed by alternating minimization of the trailing singular
// values of P(r). A probed "empty" verdict is evidence, not proof.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "schmidt/linalg.hpp"
#include "schmidt/states.hpp"

namespace schmidt {

struct BlockFamily {
  int m = 0;
  int n = 0;
  int s = 0;
  std::vector<ComplexMatrix> blocks;  // m blocks, each n x s

  /// (m*n) x s matrix whose columns are the basis amplitude vectors.
  ComplexMatrix stacked() const;

  /// m x (n*s) matrix with row w = vec(B_w)^T (column-major vec).
  ComplexMatrix row_blocks() const;

  /// Largest singular value of stacked(); the scale every pencil rank and
  /// evidence value is measured against.
  double scale() const;
};

BlockFamily build_blocks(std::span<const PureState> basis, int m, int n);

/// Family of a range basis of e.
BlockFamily build_blocks(const EnsembleState& e, const RankPolicy& policy = {});

/// sum_w r_w B_w. Throws on a zero or wrongly sized direction.
ComplexMatrix pencil_eval(const BlockFamily& f, const ComplexVector& direction);

/// Rank of P(r) with the cutoff scaled by f.scale() instead of the pencil's
/// own largest singular value, so a pencil that vanishes numerically has
/// rank 0.
int pencil_rank(const BlockFamily& f, const ComplexVector& direction, const RankPolicy& policy = {});

struct ProbeConfig {
  int samples = 2000;
  int restarts = 20;
  int descent_steps = 200;
  double step_tolerance = 1e-10;
  double emptiness_gap = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Verdict {
  EmptyExact,
  EmptyProbabilistic,
  Nonempty,
  /// Smallest probed sigma_{k+1} fell at or below emptiness_gap without a
  /// direction reaching rank <= k.
  Inconclusive,
};

std::string_view to_string(Verdict v);

inline bool is_empty(Verdict v) {
  return v == Verdict::EmptyExact || v == Verdict::EmptyProbabilistic;
}

struct EmptinessCertificate {
  int k = 0;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<ComplexVector> witness;  // present iff Nonempty
  /// Smallest sigma_{k+1}(P(r)) / f.scale() seen (at the witness for Nonempty).
  double evidence = 0.0;
  /// Smallest pencil rank seen among evaluated directions.
  int min_rank_found = 0;
  ProbeConfig config;
  RankPolicy policy;
};

/// Rank of the (r*m) x n matrix stacking every row of the coefficient
/// matrices of a range basis.
int stacked_row_rank(const EnsembleState& e, const RankPolicy& policy = {});

/// Exact level-0 decision on a family.
EmptinessCertificate v0_empty_exact(const BlockFamily& f, const RankPolicy& policy = {});

/// Exact level-0 decision for the A-side locus of e.
EmptinessCertificate v0_empty_exact(const EnsembleState& e, const RankPolicy& policy = {});

struct PencilRankEstimate {
  int rank = 0;
  ComplexVector direction;
  RealVector relative_singular_values;  // sigma_i(P(direction)) / f.scale()
};

enum class Route { Auto, Exact, Probabilistic };

/// Caches the random sample of directions so several levels can be probed
/// on the same family without resampling.
class PencilProber {
 public:
  PencilProber(const BlockFamily& f, const ProbeConfig& cfg, const RankPolicy& policy = {});

  EmptinessCertificate probe(int k) const;
  PencilRankEstimate min_rank() const;

  const BlockFamily& family() const { return family_; }

 private:
  struct Sample {
    ComplexVector direction;
    RealVector rel_sv;
    int rank;
  };

  struct DescentResult {
    ComplexVector best_direction;
    double best_evidence;
    int best_rank;
    int min_rank_seen;
  };

  DescentResult descend(int k, const ComplexVector& start) const;
  void polish(int k, ComplexVector r, DescentResult& res) const;
  double evaluate(const ComplexVector& r, int k, RealVector& rel_sv, int& rank) const;

  BlockFamily family_;
  ProbeConfig cfg_;
  RankPolicy policy_;
  double scale_;
  std::vector<Sample> samples_;
};

/// Smallest pencil rank found by probing; an upper bound on the true minimum.
PencilRankEstimate min_pencil_rank(const BlockFamily& f, const ProbeConfig& cfg = {},
                                   const RankPolicy& policy = {});

/// Requires 0 <= k <= min(n, s). Route::Auto uses the exact test at k = 0.
EmptinessCertificate locus_empty(const BlockFamily& f, int k, const ProbeConfig& cfg = {},
                                 const RankPolicy& policy = {}, Route route = Route::Auto);

}  // namespace schmidt
