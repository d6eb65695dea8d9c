#include "schmidt/locus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "schmidt/error.hpp"
#include "schmidt/kernels.hpp"

namespace schmidt {

namespace {

std::span<const Complex> view(const ComplexMatrix& a) {
  return {a.data(), static_cast<std::size_t>(a.size())};
}

std::span<Complex> view(ComplexMatrix& a) {
  return {a.data(), static_cast<std::size_t>(a.size())};
}

// Removes the global phase so that directions compare projectively.
ComplexVector phase_aligned(const ComplexVector& r, const ComplexVector& reference) {
  const Complex overlap = reference.dot(r);  // conj(reference) . r
  const double a = std::abs(overlap);
  if (a == 0.0) return r;
  return r * std::conj(overlap / a);
}

}  // namespace

ComplexMatrix BlockFamily::stacked() const {
  ComplexMatrix out(Eigen::Index(m) * n, s);
  for (int w = 0; w < m; ++w) out.middleRows(Eigen::Index(w) * n, n) = blocks[std::size_t(w)];
  return out;
}

ComplexMatrix BlockFamily::row_blocks() const {
  ComplexMatrix out(m, Eigen::Index(n) * s);
  for (int w = 0; w < m; ++w) {
    const auto& b = blocks[std::size_t(w)];
    out.row(w) = Eigen::Map<const Eigen::RowVectorXcd>(b.data(), b.size());
  }
  return out;
}

double BlockFamily::scale() const {
  const RealVector sv = singular_values(stacked());
  return sv.size() ? sv(0) : 0.0;
}

BlockFamily build_blocks(std::span<const PureState> basis, int m, int n) {
  require(!basis.empty(), "build_blocks: basis must be nonempty");
  require(m >= 1 && n >= 1, "build_blocks: dimensions must be positive");
  BlockFamily f;
  f.m = m;
  f.n = n;
  f.s = static_cast<int>(basis.size());
  f.blocks.assign(std::size_t(m), ComplexMatrix::Zero(n, f.s));
  for (int l = 0; l < f.s; ++l) {
    const auto& v = basis[std::size_t(l)];
    require(v.m() == m && v.n() == n,
            "build_blocks: basis vector " + std::to_string(l) + " has mismatched dimensions");
    for (int w = 0; w < m; ++w)
      for (int j = 0; j < n; ++j)
        f.blocks[std::size_t(w)](j, l) = v.amplitudes()(PureState::flat_index(w, j, n));
  }
  return f;
}

BlockFamily build_blocks(const EnsembleState& e, const RankPolicy& policy) {
  const auto basis = range_basis(e, policy);
  return build_blocks(basis, e.m(), e.n());
}

ComplexMatrix pencil_eval(const BlockFamily& f, const ComplexVector& direction) {
  require(direction.size() == f.m, "pencil_eval: direction must have m entries");
  require(direction.cwiseAbs().maxCoeff() > 0.0, "pencil_eval: direction must be nonzero");
  ComplexMatrix out = ComplexMatrix::Zero(f.n, f.s);
  for (int w = 0; w < f.m; ++w) {
    if (direction(w) == Complex(0.0)) continue;
    kernels::caxpy(direction(w), view(f.blocks[std::size_t(w)]), view(out));
  }
  return out;
}

int pencil_rank(const BlockFamily& f, const ComplexVector& direction, const RankPolicy& policy) {
  policy.validate();
  const RealVector sv = singular_values(pencil_eval(f, direction));
  const double cut = policy.cutoff(f.scale(), f.n, f.s);
  return static_cast<int>((sv.array() > cut).count());
}

void ProbeConfig::validate() const {
  require(samples >= 1, "probe config: samples must be >= 1");
  require(restarts >= 1, "probe config: restarts must be >= 1");
  require(descent_steps >= 1, "probe config: descent_steps must be >= 1");
  require(step_tolerance > 0.0, "probe config: step_tolerance must be positive");
  require(emptiness_gap > 0.0 && emptiness_gap < 1.0,
          "probe config: emptiness_gap must lie in (0, 1)");
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::EmptyExact: return "empty-exact";
    case Verdict::EmptyProbabilistic: return "empty-probabilistic";
    case Verdict::Nonempty: return "nonempty";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

int stacked_row_rank(const EnsembleState& e, const RankPolicy& policy) {
  const auto basis = range_basis(e, policy);
  ComplexMatrix rows(Eigen::Index(basis.size()) * e.m(), e.n());
  for (std::size_t l = 0; l < basis.size(); ++l)
    rows.middleRows(Eigen::Index(l) * e.m(), e.m()) = coefficient_matrix(basis[l]);
  return numerical_rank(rows, policy);
}

EmptinessCertificate v0_empty_exact(const BlockFamily& f, const RankPolicy& policy) {
  policy.validate();
  EmptinessCertificate cert;
  cert.k = 0;
  cert.policy = policy;

  // P(r) = 0  <=>  W^T r = 0 with W = row_blocks().
  const ComplexMatrix wt = f.row_blocks().transpose();
  Eigen::JacobiSVD<ComplexMatrix> svd(wt, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const int rank = rank_from_singular_values(sv, wt.rows(), wt.cols(), policy);
  const double scale = f.scale();

  ComplexVector best = svd.matrixV().col(f.m - 1);
  best /= best.norm();
  // sv has min(ns, m) entries; fewer than m means a nontrivial kernel.
  const double smallest = sv.size() == f.m ? sv(f.m - 1) : 0.0;
  cert.evidence = scale > 0.0 ? smallest / scale : 0.0;

  if (rank == f.m) {
    cert.verdict = Verdict::EmptyExact;
    cert.min_rank_found = std::max(1, pencil_rank(f, best, policy));
  } else {
    cert.verdict = Verdict::Nonempty;
    cert.min_rank_found = pencil_rank(f, best, policy);
    cert.witness = best;
  }
  return cert;
}

EmptinessCertificate v0_empty_exact(const EnsembleState& e, const RankPolicy& policy) {
  return v0_empty_exact(build_blocks(e, policy), policy);
}

PencilProber::PencilProber(const BlockFamily& f, const ProbeConfig& cfg, const RankPolicy& policy)
    : family_(f), cfg_(cfg), policy_(policy), scale_(f.scale()) {
  cfg_.validate();
  policy_.validate();
  require(f.m >= 1 && f.n >= 1 && f.s >= 1 && f.blocks.size() == std::size_t(f.m),
          "pencil prober: malformed block family");
  require(scale_ > 0.0, "pencil prober: block family is identically zero");

  samples_.reserve(std::size_t(cfg_.samples));
  for (int i = 0; i < cfg_.samples; ++i) {
    auto stream = RandomStream::derive(cfg_.seed, std::uint64_t(i));
    Sample smp{sample_unit_vector(f.m, stream), {}, 0};
    evaluate(smp.direction, 0, smp.rel_sv, smp.rank);
    samples_.push_back(std::move(smp));
  }
}

double PencilProber::evaluate(const ComplexVector& r, int k, RealVector& rel_sv, int& rank) const {
  const RealVector sv = singular_values(pencil_eval(family_, r));
  const double cut = policy_.cutoff(scale_, family_.n, family_.s);
  rank = static_cast<int>((sv.array() > cut).count());
  rel_sv = sv / scale_;
  return k < rel_sv.size() ? rel_sv(k) : 0.0;
}

PencilProber::DescentResult PencilProber::descend(int k, const ComplexVector& start) const {
  const int n = family_.n;
  const int s = family_.s;
  const int m = family_.m;
  const int trailing = std::min(n, s) - k;
  const bool right_side = n >= s;

  DescentResult res{start, std::numeric_limits<double>::infinity(), std::min(n, s),
                    std::min(n, s)};
  ComplexVector r = start;
  const double cut = policy_.cutoff(scale_, n, s);

  std::vector<ComplexMatrix> reduced(static_cast<std::size_t>(m));
  ComplexMatrix gram(m, m);

  double previous = std::numeric_limits<double>::infinity();
  for (int step = 0; step <= cfg_.descent_steps; ++step) {
    const ComplexMatrix p = pencil_eval(family_, r);
    Eigen::JacobiSVD<ComplexMatrix> svd(
        p, right_side ? Eigen::ComputeFullV : Eigen::ComputeFullU);
    const RealVector& sv = svd.singularValues();
    const int rank = static_cast<int>((sv.array() > cut).count());
    const double ev = sv(k) / scale_;

    res.min_rank_seen = std::min(res.min_rank_seen, rank);
    if (ev < res.best_evidence) {
      res.best_evidence = ev;
      res.best_direction = r;
      res.best_rank = rank;
    }
    if (rank <= k || step == cfg_.descent_steps) break;

    // Stalled at a positive value: relative decrease of sum_{i>k} sigma_i^2
    // below step_tolerance. Linear convergence toward a zero keeps going.
    const double objective = sv.tail(trailing).squaredNorm();
    if (std::isfinite(previous) && previous - objective <= cfg_.step_tolerance * previous) break;
    previous = objective;

    // Block coordinate step: with the trailing singular subspace of P(r)
    // fixed, sum_{i>k} sigma_i^2 becomes a Hermitian form r^H G r, minimized
    // over the unit sphere by G's lowest eigenvector.
    if (right_side) {
      const ComplexMatrix x = svd.matrixV().rightCols(trailing);
      for (int w = 0; w < m; ++w) reduced[std::size_t(w)].noalias() = family_.blocks[std::size_t(w)] * x;
    } else {
      const ComplexMatrix y = svd.matrixU().rightCols(trailing);
      for (int w = 0; w < m; ++w)
        reduced[std::size_t(w)].noalias() = y.adjoint() * family_.blocks[std::size_t(w)];
    }
    for (int v = 0; v < m; ++v) {
      for (int w = v; w < m; ++w) {
        const Complex g = kernels::cdotc(view(reduced[std::size_t(v)]), view(reduced[std::size_t(w)]));
        gram(v, w) = g;
        gram(w, v) = std::conj(g);
      }
      gram(v, v) = gram(v, v).real();
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram);
    if (eig.info() != Eigen::Success) break;
    r = phase_aligned(eig.eigenvectors().col(0).normalized(), r);
  }
  if (res.best_rank > k) polish(k, res.best_direction, res);
  return res;
}

// Gauss-Newton on the bilinear system P(r) X = 0, X the s x (s - k) trailing
// right singular vectors. Quadratic near a zero of the residual, where the
// alternating steps above slow to a linear crawl; on an empty locus the
// residual stops decreasing after a step or two.
void PencilProber::polish(int k, ComplexVector r, DescentResult& res) const {
  const int n = family_.n;
  const int s = family_.s;
  const int m = family_.m;
  const int q = s - k;
  const double cut = policy_.cutoff(scale_, n, s);
  constexpr int kMaxSteps = 30;

  ComplexMatrix x;
  double objective = std::numeric_limits<double>::infinity();
  for (int step = 0; step < kMaxSteps; ++step) {
    const ComplexMatrix p = pencil_eval(family_, r);
    Eigen::JacobiSVD<ComplexMatrix> svd(p, step == 0 ? Eigen::ComputeFullV : 0);
    const RealVector& sv = svd.singularValues();
    const int rank = static_cast<int>((sv.array() > cut).count());
    const double ev = k < sv.size() ? sv(k) / scale_ : 0.0;
    res.min_rank_seen = std::min(res.min_rank_seen, rank);
    if (ev < res.best_evidence) {
      res.best_evidence = ev;
      res.best_direction = r;
      res.best_rank = rank;
    }
    if (rank <= k) return;

    if (step == 0) x = svd.matrixV().rightCols(q);
    const ComplexMatrix residual = p * x;
    const double f = residual.squaredNorm();
    if (!(f < objective)) return;
    objective = f;

    // Steps are restricted to the tangent spaces: dr orthogonal to r, dX
    // orthogonal to the columns of X. Otherwise shrinking both wins.
    ComplexMatrix rq = Eigen::HouseholderQR<ComplexMatrix>(r).householderQ();
    const ComplexMatrix r_perp = rq.rightCols(m - 1);
    ComplexMatrix xq = Eigen::HouseholderQR<ComplexMatrix>(x).householderQ();
    const ComplexMatrix x_perp = xq.rightCols(s - q);
    const ComplexMatrix px = p * x_perp;

    ComplexMatrix jac = ComplexMatrix::Zero(Eigen::Index(n) * q, (m - 1) + Eigen::Index(s - q) * q);
    for (int w = 0; w < m; ++w) {
      const ComplexMatrix bx = family_.blocks[std::size_t(w)] * x;
      const ComplexVector col = Eigen::Map<const ComplexVector>(bx.data(), bx.size());
      for (int c = 0; c < m - 1; ++c) jac.col(c) += r_perp(w, c) * col;
    }
    for (int c = 0; c < q; ++c)
      jac.block(Eigen::Index(c) * n, (m - 1) + Eigen::Index(c) * (s - q), n, s - q) = px;

    const ComplexVector rhs = -Eigen::Map<const ComplexVector>(residual.data(), residual.size());
    const ComplexVector delta = jac.completeOrthogonalDecomposition().solve(rhs);
    if (!delta.allFinite()) return;
    const ComplexVector next = r + r_perp * delta.head(m - 1);
    const double norm = next.norm();
    if (!(norm > 0.0)) return;
    r = next / norm;
    x += x_perp * Eigen::Map<const ComplexMatrix>(delta.data() + (m - 1), s - q, q);
    x = Eigen::HouseholderQR<ComplexMatrix>(x).householderQ() * ComplexMatrix::Identity(s, q);
  }
}

EmptinessCertificate PencilProber::probe(int k) const {
  const int full = std::min(family_.n, family_.s);
  require(k >= 0 && k <= full, "locus level k must lie in [0, min(n, s)]");

  EmptinessCertificate cert;
  cert.k = k;
  cert.config = cfg_;
  cert.policy = policy_;

  if (k >= full) {
    // Every direction qualifies.
    cert.verdict = Verdict::Nonempty;
    cert.witness = samples_.front().direction;
    cert.min_rank_found = samples_.front().rank;
    cert.evidence = 0.0;
    return cert;
  }

  int min_rank = full;
  double min_evidence = std::numeric_limits<double>::infinity();
  for (const auto& smp : samples_) {
    min_rank = std::min(min_rank, smp.rank);
    min_evidence = std::min(min_evidence, smp.rel_sv(k));
    if (smp.rank <= k) {
      cert.verdict = Verdict::Nonempty;
      cert.witness = smp.direction;
      cert.evidence = smp.rel_sv(k);
      cert.min_rank_found = smp.rank;
      return cert;
    }
  }

  std::vector<std::size_t> order(samples_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t starts = std::min(order.size(), std::size_t(cfg_.restarts));
  std::partial_sort(order.begin(), order.begin() + std::ptrdiff_t(starts), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double ea = samples_[a].rel_sv(k);
                      const double eb = samples_[b].rel_sv(k);
                      return ea < eb || (ea == eb && a < b);
                    });

  for (std::size_t i = 0; i < starts; ++i) {
    const auto res = descend(k, samples_[order[i]].direction);
    min_rank = std::min(min_rank, res.min_rank_seen);
    min_evidence = std::min(min_evidence, res.best_evidence);
    if (res.best_rank <= k) {
      cert.verdict = Verdict::Nonempty;
      cert.witness = res.best_direction;
      cert.evidence = res.best_evidence;
      cert.min_rank_found = res.best_rank;
      return cert;
    }
  }

  cert.evidence = min_evidence;
  cert.min_rank_found = min_rank;
  cert.verdict = min_evidence > cfg_.emptiness_gap ? Verdict::EmptyProbabilistic
                                                   : Verdict::Inconclusive;
  return cert;
}

PencilRankEstimate PencilProber::min_rank() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples_.size(); ++i)
    if (samples_[i].rank < samples_[best].rank) best = i;

  PencilRankEstimate est{samples_[best].rank, samples_[best].direction, samples_[best].rel_sv};
  for (int k = est.rank - 1; k >= 0;) {
    const auto cert = probe(k);
    if (cert.verdict != Verdict::Nonempty) break;
    est.direction = *cert.witness;
    int rank = 0;
    evaluate(est.direction, 0, est.relative_singular_values, rank);
    est.rank = rank;
    k = rank - 1;
  }
  return est;
}

PencilRankEstimate min_pencil_rank(const BlockFamily& f, const ProbeConfig& cfg,
                                   const RankPolicy& policy) {
  return PencilProber(f, cfg, policy).min_rank();
}

EmptinessCertificate locus_empty(const BlockFamily& f, int k, const ProbeConfig& cfg,
                                 const RankPolicy& policy, Route route) {
  cfg.validate();
  require(k >= 0 && k <= std::min(f.n, f.s), "locus level k must lie in [0, min(n, s)]");
  if (route == Route::Exact)
    require(k == 0, "the exact route only decides level 0");
  if (k == 0 && route != Route::Probabilistic) {
    auto cert = v0_empty_exact(f, policy);
    cert.config = cfg;
    return cert;
  }
  return PencilProber(f, cfg, policy).probe(k);
}

}  // namespace schmidt
