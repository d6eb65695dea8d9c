#pragma once

// Bipartite pure and mixed states on C^m (x) C^n.
//
// Basis kets are ordered |11>,...,|1n>,...,|m1>,...,|mn>; with 0-based
// indices the amplitude of |ij> sits at flat position i*n + j. The
// coefficient matrix of a pure state is the m x n matrix A with A(i,j) equal
// to that amplitude.

#include <cstdint>
#include <optional>
#include <vector>

#include "schmidt/linalg.hpp"

namespace schmidt {

inline constexpr double kNormTolerance = 1e-9;

class PureState {
 public:
  /// Requires amplitudes.size() == m*n and unit norm within 1e-9.
  PureState(int m, int n, ComplexVector amplitudes);

  /// Scales any nonzero vector to unit norm.
  static PureState normalized(int m, int n, ComplexVector amplitudes);

  /// Row-major m x n coefficients.
  static PureState from_coefficients(const ComplexMatrix& coefficients);

  int m() const { return m_; }
  int n() const { return n_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }

  static Eigen::Index flat_index(int i, int j, int n) { return Eigen::Index(i) * n + j; }

 private:
  int m_;
  int n_;
  ComplexVector amplitudes_;
};

ComplexMatrix coefficient_matrix(const PureState& v);

/// Tensor factors swapped: coefficient matrix transposed, giving a state on
/// C^n (x) C^m. B-side questions reduce to A-side ones through this.
PureState swap_parties(const PureState& v);

/// (U_A (x) U_B) v
PureState apply_local(const PureState& v, const ComplexMatrix& ua, const ComplexMatrix& ub);

struct SchmidtInfo {
  int rank = 0;
  RealVector singular_values;  // descending
};

SchmidtInfo schmidt_rank(const PureState& v, const RankPolicy& policy = {});

struct Member {
  double weight;
  PureState state;
};

/// Mixed state as a convex combination sum_l p_l |v_l><v_l|. The members need
/// not be orthogonal; rank is the dimension of their span.
class EnsembleState {
 public:
  /// Weights must be positive and sum to 1 within 1e-9; members must match
  /// (m, n).
  EnsembleState(int m, int n, std::vector<Member> members, const RankPolicy& policy = {});

  int m() const { return m_; }
  int n() const { return n_; }
  int rank() const { return rank_; }
  const std::vector<Member>& members() const { return members_; }

  ComplexMatrix density() const;

 private:
  int m_;
  int n_;
  std::vector<Member> members_;
  int rank_;
};

/// Spectral ensemble of a density matrix. Eigenvalues at or below
/// 1e-12 * lambda_max are dropped.
EnsembleState from_density(const ComplexMatrix& rho, int m, int n,
                           const RankPolicy& policy = {});

/// Maximal linearly independent subset of the members, in member order.
std::vector<PureState> range_basis(const EnsembleState& e, const RankPolicy& policy = {});

EnsembleState swap_parties(const EnsembleState& e);
EnsembleState apply_local(const EnsembleState& e, const ComplexMatrix& ua, const ComplexMatrix& ub);

/// r Gaussian pure states with weights uniform on the simplex.
EnsembleState random_rank_r_state(int m, int n, int r, std::uint64_t seed,
                                  const RankPolicy& policy = {});

PureState random_pure_state(int m, int n, RandomStream& stream);
PureState random_product_state(int m, int n, RandomStream& stream);

// Worked examples.

/// (|11> + ... + |mm>) / sqrt(m)
PureState max_entangled(int m);

/// 5x5, v1 = (|11>+|22>)/sqrt2, v2 = (|33>+|44>+|55>+|45>)/2, weights
/// lambda_i / (lambda_1 + lambda_2).
EnsembleState example1(double lambda1, double lambda2);
PureState example1_v1();
PureState example1_v2();

/// 7x7, v1 = max_entangled(7); v2, v3 are the two members of
/// random_rank_r_state(7, 7, 2, seed).
EnsembleState example2(double lambda1, double lambda2, double lambda3, std::uint64_t seed);

}  // namespace schmidt
