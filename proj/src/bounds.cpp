#include "schmidt/bounds.hpp"

#include <algorithm>
#include <string>

#include "schmidt/error.hpp"

namespace schmidt {

int isqrt(int x) {
  require(x >= 0, "isqrt: negative argument");
  int r = 0;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

int theorem2_bound(int m, int r, int t) {
  require(m >= 1 && r >= 1, "theorem2_bound: m and r must be positive");
  require(t >= 1 && t <= m, "theorem2_bound: t must lie in [1, m]");
  const int denom = r - m + t;
  require(denom >= 1, "theorem2_bound: r - m + t must be at least 1 (got " +
                          std::to_string(denom) + ")");
  return (m + denom - 1) / denom;
}

bool generic_t_condition(int m, int r, int t) {
  return static_cast<long long>(t) * (r - m + t) >= m;
}

GenericBound optimal_generic_bound(int m, int r) {
  require(m >= 1 && r >= 1, "optimal_generic_bound: m and r must be positive");
  GenericBound out;
  for (int t = std::max(1, m - r + 1); t <= m; ++t) {
    if (generic_t_condition(m, r, t)) {
      out.t_star = t;
      out.bound = theorem2_bound(m, r, t);
      break;
    }
  }
  return out;
}

std::vector<CaseBound> theorem1_case_bounds(int m, int r) {
  require(m >= 2 && r >= 1, "theorem1_case_bounds: requires m >= 2 and r >= 1");
  const int root = isqrt(m);
  std::vector<CaseBound> out;
  out.push_back({GenericCase::SqrtBelowRank, r <= m, root - 1});
  {
    const int denom = r - m + root + 1;
    const bool applicable = r > m;
    out.push_back({GenericCase::SqrtAboveRank, applicable,
                   applicable ? (m + denom - 1) / denom : 0});
  }
  // 3m/2 - 5 >= r, kept in integers as 3m - 10 >= 2r.
  out.push_back({GenericCase::Three, 3 * m - 10 >= 2 * r && r > m && m >= 169, 3});
  out.push_back({GenericCase::Two, r <= 2 * m - 3, 2});
  return out;
}

const char* to_string(Side side) { return side == Side::A ? "A" : "B"; }

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::None: return "none";
    case Provenance::Exact: return "exact";
    case Provenance::Probabilistic: return "probabilistic";
  }
  return "unknown";
}

namespace {

ChainEntry make_entry(int m, int r, int t, Side side, const EmptinessCertificate& cert) {
  ChainEntry entry;
  entry.t = t;
  entry.k = cert.k;
  entry.side = side;
  entry.verdict = cert.verdict;
  entry.evidence = cert.evidence;
  entry.min_rank_found = cert.min_rank_found;
  entry.bound_if_empty = theorem2_bound(m, r, t);
  return entry;
}

}  // namespace

BoundReport analyze(const EnsembleState& e, const ProbeConfig& cfg, const RankPolicy& policy,
                    const AnalyzeOptions& options) {
  if (e.m() != e.n())
    fail(ErrorCode::Unsupported, "analyze: bounds are only available for m = n (got " +
                                     std::to_string(e.m()) + "x" + std::to_string(e.n()) + ")");
  cfg.validate();
  policy.validate();

  const int m = e.m();
  const int r = e.rank();

  BoundReport report;
  report.m = m;
  report.n = e.n();
  report.r = r;
  report.policy = policy;
  report.config = cfg;

  if (r <= 2 * m - 3) {
    const auto generic = optimal_generic_bound(m, r);
    report.generic_bound = generic.bound;
    report.generic_t = generic.t_star;
  }

  if (options.only_t) {
    const int t = *options.only_t;
    require(t >= 1 && t <= m, "analyze: t must lie in [1, m]");
    require(r - m + t >= 1, "analyze: t must satisfy r - m + t >= 1");
  }
  const auto wanted = [&](int t) { return !options.only_t || *options.only_t == t; };

  const BlockFamily family = build_blocks(e, policy);

  if (wanted(m)) {
    report.chain.push_back(make_entry(m, r, m, Side::A, v0_empty_exact(family, policy)));
    report.chain.push_back(make_entry(m, r, m, Side::B, v0_empty_exact(swap_parties(e), policy)));
  }

  std::vector<int> probed;
  if (options.only_t) {
    if (*options.only_t < m) probed.push_back(*options.only_t);
  } else if (const auto generic = optimal_generic_bound(m, r); generic.t_star) {
    for (int t = *generic.t_star; t < m; ++t) probed.push_back(t);
  }
  if (!probed.empty()) {
    const PencilProber prober(family, cfg, policy);
    for (int t : probed) report.chain.push_back(make_entry(m, r, t, Side::A, prober.probe(m - t)));
  }

  int probabilistic = 1;
  for (const auto& entry : report.chain) {
    if (entry.verdict == Verdict::EmptyExact)
      report.exact_bound = std::max(report.exact_bound, entry.bound_if_empty);
    else if (entry.verdict == Verdict::EmptyProbabilistic)
      probabilistic = std::max(probabilistic, entry.bound_if_empty);
  }
  report.certified_bound = std::max(report.exact_bound, probabilistic);
  if (report.certified_bound > 1)
    report.provenance = report.exact_bound >= probabilistic ? Provenance::Exact
                                                            : Provenance::Probabilistic;
  return report;
}

}  // namespace schmidt
