#include "schmidt/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "schmidt/error.hpp"

namespace schmidt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::WrongShape: return "wrong-shape";
    case ErrorCode::NotHermitian: return "not-hermitian";
    case ErrorCode::NotPositiveSemidefinite: return "not-positive-semidefinite";
    case ErrorCode::TraceMismatch: return "trace-mismatch";
    case ErrorCode::Unsupported: return "unsupported-configuration";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

void RankPolicy::validate() const {
  require(relative_threshold > 0.0 && std::isfinite(relative_threshold),
          "rank policy: relative_threshold must be positive");
  require(absolute_floor >= 0.0 && std::isfinite(absolute_floor),
          "rank policy: absolute_floor must be nonnegative");
}

double RankPolicy::cutoff(double sigma_max, Eigen::Index rows, Eigen::Index cols) const {
  return std::max(relative_threshold * sigma_max * static_cast<double>(std::max(rows, cols)),
                  absolute_floor);
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  require(all_finite(m), "singular values: matrix has non-finite entries");
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

int rank_from_singular_values(const RealVector& sv, Eigen::Index rows, Eigen::Index cols,
                              const RankPolicy& policy) {
  if (sv.size() == 0) return 0;
  const double cut = policy.cutoff(sv(0), rows, cols);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return rank;
}

int numerical_rank(const ComplexMatrix& m, const RankPolicy& policy) {
  policy.validate();
  require(all_finite(m), "numerical_rank: matrix has non-finite entries");
  return rank_from_singular_values(singular_values(m), m.rows(), m.cols(), policy);
}

double hermitian_deviation(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<EigenPair> hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::WrongShape, "hermitian_eig: matrix is not square");
  if (!all_finite(m)) fail(ErrorCode::InvalidInput, "hermitian_eig: non-finite entries");
  if (hermitian_deviation(m) > kHermitianTolerance)
    fail(ErrorCode::NotHermitian, "hermitian_eig: matrix is not Hermitian within 1e-10");

  // Symmetrize so the solver sees an exactly Hermitian matrix.
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::Internal, "hermitian_eig: eigensolver did not converge");

  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(h.rows()));
  for (Eigen::Index i = h.rows() - 1; i >= 0; --i)
    out.push_back({solver.eigenvalues()(i), solver.eigenvectors().col(i)});
  return out;
}

ComplexMatrix stack_columns(std::span<const ComplexVector> vectors) {
  if (vectors.empty()) return ComplexMatrix();
  const Eigen::Index dim = vectors.front().size();
  ComplexMatrix out(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    require(vectors[j].size() == dim, "stack_columns: vectors differ in dimension");
    out.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return out;
}

std::vector<std::size_t> column_space_indices(std::span<const ComplexVector> vectors,
                                              const RankPolicy& policy) {
  policy.validate();
  std::vector<std::size_t> kept;
  if (vectors.empty()) return kept;
  const Eigen::Index dim = vectors.front().size();
  for (const auto& v : vectors)
    require(v.size() == dim, "column_space_basis: vectors differ in dimension");

  // The threshold scale is taken from the whole input so that the greedy pass
  // and the rank of the full stack use the same cutoff.
  const ComplexMatrix all = stack_columns(vectors);
  const RealVector all_sv = singular_values(all);
  const double cut = all_sv.size() ? policy.cutoff(all_sv(0), all.rows(), all.cols()) : 0.0;
  const int target = rank_from_singular_values(all_sv, all.rows(), all.cols(), policy);

  ComplexMatrix selected(dim, 0);
  for (std::size_t j = 0; j < vectors.size() && static_cast<int>(kept.size()) < target; ++j) {
    ComplexMatrix trial(dim, selected.cols() + 1);
    trial << selected, vectors[j];
    const RealVector sv = singular_values(trial);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cut) ++r;
    if (r > static_cast<int>(kept.size())) {
      kept.push_back(j);
      selected = std::move(trial);
    }
  }
  return kept;
}

std::vector<ComplexVector> column_space_basis(std::span<const ComplexVector> vectors,
                                              const RankPolicy& policy) {
  std::vector<ComplexVector> out;
  for (auto idx : column_space_indices(vectors, policy)) out.push_back(vectors[idx]);
  return out;
}

std::uint64_t RandomStream::mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t seed, std::uint64_t index) {
  return RandomStream(mix(seed) ^ mix(index + 0x632be59bd9b4e019ULL));
}

Complex RandomStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

ComplexVector sample_unit_vector(int dim, RandomStream& stream) {
  require(dim >= 1, "sample_unit_vector: dim must be positive");
  ComplexVector v(dim);
  double norm = 0.0;
  // A zero draw has probability zero; loop anyway rather than divide by it.
  while (norm == 0.0) {
    for (int i = 0; i < dim; ++i) v(i) = stream.complex_normal();
    norm = v.norm();
  }
  return v / norm;
}

ComplexMatrix random_unitary(int dim, RandomStream& stream) {
  require(dim >= 1, "random_unitary: dim must be positive");
  ComplexMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = stream.complex_normal();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix& r = qr.matrixQR();
  for (int i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    const double a = std::abs(d);
    if (a > 0.0) q.col(i) *= d / a;
  }
  return q;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace schmidt
