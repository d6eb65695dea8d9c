#include "schmidt/states.hpp"

#include <cmath>
#include <string>

#include "schmidt/error.hpp"

namespace schmidt {

namespace {

void check_dims(int m, int n) {
  require(m >= 1 && n >= 1, "state dimensions must be positive");
}

std::vector<ComplexVector> amplitude_columns(const std::vector<Member>& members) {
  std::vector<ComplexVector> cols;
  cols.reserve(members.size());
  for (const auto& mem : members) cols.push_back(mem.state.amplitudes());
  return cols;
}

}  // namespace

PureState::PureState(int m, int n, ComplexVector amplitudes)
    : m_(m), n_(n), amplitudes_(std::move(amplitudes)) {
  check_dims(m, n);
  require(amplitudes_.size() == Eigen::Index(m) * n,
          "pure state: expected " + std::to_string(m * n) + " amplitudes, got " +
              std::to_string(amplitudes_.size()));
  require(all_finite(amplitudes_), "pure state: non-finite amplitude");
  require(std::abs(amplitudes_.norm() - 1.0) <= kNormTolerance,
          "pure state: amplitudes are not unit norm");
}

PureState PureState::normalized(int m, int n, ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  require(norm > 0.0 && std::isfinite(norm), "pure state: cannot normalize a zero vector");
  return PureState(m, n, amplitudes / norm);
}

PureState PureState::from_coefficients(const ComplexMatrix& a) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  check_dims(m, n);
  ComplexVector v(a.size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) v(flat_index(i, j, n)) = a(i, j);
  return PureState(m, n, std::move(v));
}

ComplexMatrix coefficient_matrix(const PureState& v) {
  ComplexMatrix a(v.m(), v.n());
  for (int i = 0; i < v.m(); ++i)
    for (int j = 0; j < v.n(); ++j) a(i, j) = v.amplitudes()(PureState::flat_index(i, j, v.n()));
  return a;
}

PureState swap_parties(const PureState& v) {
  return PureState::from_coefficients(coefficient_matrix(v).transpose());
}

PureState apply_local(const PureState& v, const ComplexMatrix& ua, const ComplexMatrix& ub) {
  require(ua.rows() == v.m() && ua.cols() == v.m() && ub.rows() == v.n() && ub.cols() == v.n(),
          "apply_local: unitary dimensions do not match the state");
  // (U_A (x) U_B) vec(A) corresponds to U_A A U_B^T in the coefficient view.
  return PureState::normalized(v.m(), v.n(),
                               PureState::from_coefficients(ComplexMatrix(
                                   ua * coefficient_matrix(v) * ub.transpose()))
                                   .amplitudes());
}

SchmidtInfo schmidt_rank(const PureState& v, const RankPolicy& policy) {
  const ComplexMatrix a = coefficient_matrix(v);
  SchmidtInfo info;
  info.singular_values = singular_values(a);
  info.rank = rank_from_singular_values(info.singular_values, a.rows(), a.cols(), policy);
  return info;
}

EnsembleState::EnsembleState(int m, int n, std::vector<Member> members, const RankPolicy& policy)
    : m_(m), n_(n), members_(std::move(members)), rank_(0) {
  check_dims(m, n);
  policy.validate();
  require(!members_.empty(), "ensemble: at least one member is required");
  double total = 0.0;
  for (std::size_t l = 0; l < members_.size(); ++l) {
    const auto& mem = members_[l];
    require(mem.weight > 0.0 && std::isfinite(mem.weight),
            "ensemble: member " + std::to_string(l) + " has non-positive weight");
    require(mem.state.m() == m && mem.state.n() == n,
            "ensemble: member " + std::to_string(l) + " has mismatched dimensions");
    total += mem.weight;
  }
  require(std::abs(total - 1.0) <= kNormTolerance, "ensemble: weights do not sum to 1");
  rank_ = numerical_rank(stack_columns(amplitude_columns(members_)), policy);
}

ComplexMatrix EnsembleState::density() const {
  const Eigen::Index d = Eigen::Index(m_) * n_;
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (const auto& mem : members_) {
    const auto& v = mem.state.amplitudes();
    rho.noalias() += mem.weight * (v * v.adjoint());
  }
  return rho;
}

EnsembleState from_density(const ComplexMatrix& rho, int m, int n, const RankPolicy& policy) {
  check_dims(m, n);
  const Eigen::Index d = Eigen::Index(m) * n;
  if (rho.rows() != d || rho.cols() != d)
    fail(ErrorCode::WrongShape, "density matrix must be " + std::to_string(d) + "x" +
                                    std::to_string(d));
  if (!all_finite(rho)) fail(ErrorCode::InvalidInput, "density matrix has non-finite entries");
  if (hermitian_deviation(rho) > kHermitianTolerance)
    fail(ErrorCode::NotHermitian, "density matrix is not Hermitian within 1e-10");
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > kNormTolerance)
    fail(ErrorCode::TraceMismatch, "density matrix trace deviates from 1 by more than 1e-9");

  const auto pairs = hermitian_eig(rho);
  if (pairs.back().value < -kHermitianTolerance)
    fail(ErrorCode::NotPositiveSemidefinite,
         "density matrix has an eigenvalue below -1e-10");

  const double cutoff = 1e-12 * pairs.front().value;
  std::vector<Member> members;
  double kept = 0.0;
  for (const auto& p : pairs) {
    if (p.value <= cutoff) break;
    kept += p.value;
    members.push_back({p.value, PureState::normalized(m, n, p.vector)});
  }
  for (auto& mem : members) mem.weight /= kept;
  return EnsembleState(m, n, std::move(members), policy);
}

std::vector<PureState> range_basis(const EnsembleState& e, const RankPolicy& policy) {
  const auto cols = amplitude_columns(e.members());
  std::vector<PureState> out;
  for (auto idx : column_space_indices(cols, policy)) out.push_back(e.members()[idx].state);
  return out;
}

EnsembleState swap_parties(const EnsembleState& e) {
  std::vector<Member> members;
  for (const auto& mem : e.members()) members.push_back({mem.weight, swap_parties(mem.state)});
  return EnsembleState(e.n(), e.m(), std::move(members));
}

EnsembleState apply_local(const EnsembleState& e, const ComplexMatrix& ua,
                          const ComplexMatrix& ub) {
  std::vector<Member> members;
  for (const auto& mem : e.members()) members.push_back({mem.weight, apply_local(mem.state, ua, ub)});
  return EnsembleState(e.m(), e.n(), std::move(members));
}

PureState random_pure_state(int m, int n, RandomStream& stream) {
  check_dims(m, n);
  return PureState(m, n, sample_unit_vector(m * n, stream));
}

PureState random_product_state(int m, int n, RandomStream& stream) {
  const ComplexVector a = sample_unit_vector(m, stream);
  const ComplexVector b = sample_unit_vector(n, stream);
  return PureState::from_coefficients(a * b.transpose());
}

EnsembleState random_rank_r_state(int m, int n, int r, std::uint64_t seed,
                                  const RankPolicy& policy) {
  check_dims(m, n);
  require(r >= 1 && r <= m * n, "random_rank_r_state: r must lie in [1, m*n]");
  constexpr int kMaxRetries = 3;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    auto stream = RandomStream::derive(seed, static_cast<std::uint64_t>(attempt));
    std::vector<Member> members;
    std::vector<double> w(static_cast<std::size_t>(r));
    double total = 0.0;
    // Normalized exponential spacings are uniform on the simplex.
    for (auto& x : w) {
      x = -std::log1p(-stream.uniform());
      total += x;
    }
    for (int l = 0; l < r; ++l)
      members.push_back({w[static_cast<std::size_t>(l)] / total, random_pure_state(m, n, stream)});
    EnsembleState e(m, n, std::move(members), policy);
    if (e.rank() == r) return e;
  }
  fail(ErrorCode::Internal, "random_rank_r_state: degenerate draw after 3 retries");
}

PureState max_entangled(int m) {
  require(m >= 1, "max_entangled: m must be positive");
  return PureState::from_coefficients(ComplexMatrix::Identity(m, m) / std::sqrt(double(m)));
}

PureState example1_v1() {
  ComplexMatrix a = ComplexMatrix::Zero(5, 5);
  a(0, 0) = a(1, 1) = M_SQRT1_2;
  return PureState::from_coefficients(a);
}

PureState example1_v2() {
  ComplexMatrix a = ComplexMatrix::Zero(5, 5);
  a(2, 2) = a(3, 3) = a(4, 4) = a(3, 4) = 0.5;
  return PureState::from_coefficients(a);
}

EnsembleState example1(double lambda1, double lambda2) {
  require(lambda1 > 0.0 && lambda2 > 0.0, "example1: weights must be positive");
  const double s = lambda1 + lambda2;
  return EnsembleState(5, 5, {{lambda1 / s, example1_v1()}, {lambda2 / s, example1_v2()}});
}

EnsembleState example2(double lambda1, double lambda2, double lambda3, std::uint64_t seed) {
  require(lambda1 > 0.0 && lambda2 > 0.0 && lambda3 > 0.0, "example2: weights must be positive");
  const double s = lambda1 + lambda2 + lambda3;
  const auto others = random_rank_r_state(7, 7, 2, seed);
  return EnsembleState(7, 7,
                       {{lambda1 / s, max_entangled(7)},
                        {lambda2 / s, others.members()[0].state},
                        {lambda3 / s, others.members()[1].state}});
}

}  // namespace schmidt
