#pragma once

// Dense complex linear algebra used by every other module: numerical rank
// under an explicit tolerance policy, Hermitian eigendecomposition, column
// space bases and seeded sampling of unit vectors.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace schmidt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Singular values at or below
///   max(relative_threshold * sigma_max * max(rows, cols), absolute_floor)
/// count as zero.
struct RankPolicy {
  double relative_threshold = 1e-12;
  double absolute_floor = 0.0;

  void validate() const;
  double cutoff(double sigma_max, Eigen::Index rows, Eigen::Index cols) const;
};

/// Descending singular values; empty for an empty matrix.
RealVector singular_values(const ComplexMatrix& m);

int numerical_rank(const ComplexMatrix& m, const RankPolicy& policy = {});

/// Rank given already computed descending singular values of a rows x cols matrix.
int rank_from_singular_values(const RealVector& sv, Eigen::Index rows, Eigen::Index cols,
                              const RankPolicy& policy);

struct EigenPair {
  double value;
  ComplexVector vector;
};

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
/// Throws NotHermitian if max |M - M^dagger| exceeds 1e-10.
std::vector<EigenPair> hermitian_eig(const ComplexMatrix& m);

inline constexpr double kHermitianTolerance = 1e-10;

/// Largest absolute entry of M - M^dagger.
double hermitian_deviation(const ComplexMatrix& m);

/// Indices of a maximal linearly independent sublist, chosen greedily in
/// input order.
std::vector<std::size_t> column_space_indices(std::span<const ComplexVector> vectors,
                                              const RankPolicy& policy = {});

std::vector<ComplexVector> column_space_basis(std::span<const ComplexVector> vectors,
                                              const RankPolicy& policy = {});

/// Columns side by side; all vectors must share one dimension.
ComplexMatrix stack_columns(std::span<const ComplexVector> vectors);

/// Deterministic random stream. Substreams are keyed by (seed, index) so a
/// unit of work gets the same numbers no matter which thread or order runs it.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(mix(seed)) {}

  static RandomStream derive(std::uint64_t seed, std::uint64_t index);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  Complex complex_normal();

 private:
  static std::uint64_t mix(std::uint64_t x);

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Standard complex Gaussian entries, then normalized (unitarily invariant).
ComplexVector sample_unit_vector(int dim, RandomStream& stream);

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// phases of R's diagonal divided out.
ComplexMatrix random_unitary(int dim, RandomStream& stream);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

bool all_finite(const ComplexMatrix& m);

}  // namespace schmidt
