#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "schmidt/error.hpp"
#include "schmidt/states.hpp"

using namespace schmidt;

namespace {

PureState basis_ket(int m, int n, int i, int j) {
  ComplexVector a = ComplexVector::Zero(Eigen::Index(m) * n);
  a(PureState::flat_index(i, j, n)) = 1.0;
  return PureState(m, n, a);
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::Internal;
}

// Pure state with prescribed, well separated Schmidt coefficients.
PureState with_schmidt_rank(int m, int n, int k, RandomStream& rs) {
  ComplexMatrix d = ComplexMatrix::Zero(m, n);
  for (int i = 0; i < k; ++i) d(i, i) = 1.0 + i;
  const ComplexMatrix a = random_unitary(m, rs) * d * random_unitary(n, rs);
  return PureState::from_coefficients(a / a.norm());
}

}  // namespace

TEST(PureState, ValidatesNormAndSize) {
  ComplexVector a = ComplexVector::Zero(4);
  a(0) = 1.0 + 1e-10;
  EXPECT_NO_THROW(PureState(2, 2, a));
  a(0) = 1.001;
  EXPECT_THROW(PureState(2, 2, a), Error);
  EXPECT_THROW(PureState(2, 3, ComplexVector::Zero(4)), Error);
  EXPECT_THROW(PureState::normalized(2, 2, ComplexVector::Zero(4)), Error);
}

TEST(CoefficientMatrix, Examples) {
  const ComplexMatrix k11 = coefficient_matrix(basis_ket(2, 2, 0, 0));
  ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  EXPECT_EQ(k11, expect);

  const ComplexMatrix bell = coefficient_matrix(max_entangled(2));
  EXPECT_LE((bell - ComplexMatrix::Identity(2, 2) / std::sqrt(2.0)).cwiseAbs().maxCoeff(), 1e-15);

  const ComplexMatrix v2 = coefficient_matrix(example1_v2());
  ComplexMatrix e2 = ComplexMatrix::Zero(5, 5);
  e2(2, 2) = e2(3, 3) = e2(4, 4) = e2(3, 4) = 0.5;
  EXPECT_LE((v2 - e2).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(CoefficientMatrix, RoundTripWithFlatIndex) {
  RandomStream rs(1);
  const auto v = random_pure_state(3, 4, rs);
  const ComplexMatrix a = coefficient_matrix(v);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(a(i, j), v.amplitudes()(PureState::flat_index(i, j, 4)));
  EXPECT_EQ(PureState::from_coefficients(a).amplitudes(), v.amplitudes());
  EXPECT_EQ(coefficient_matrix(swap_parties(v)), a.transpose());
}

TEST(SchmidtRank, Examples) {
  EXPECT_EQ(schmidt_rank(basis_ket(3, 3, 0, 0)).rank, 1);
  EXPECT_EQ(schmidt_rank(max_entangled(7)).rank, 7);

  const auto v2 = example1_v2();
  const int exact = oracle::exact_rank(oracle::scaled_integers(coefficient_matrix(v2), 2.0));
  EXPECT_EQ(exact, 3);
  EXPECT_EQ(schmidt_rank(v2).rank, exact);
  EXPECT_EQ(schmidt_rank(example1_v1()).rank, 2);
}

TEST(SchmidtRank, SingularValuesSquareSumToOne) {
  RandomStream rs(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + trial % 6;
    const int n = 1 + (trial * 5) % 7;
    const auto info = schmidt_rank(random_pure_state(m, n, rs));
    EXPECT_NEAR(info.singular_values.squaredNorm(), 1.0, 1e-9);
    for (Eigen::Index i = 1; i < info.singular_values.size(); ++i)
      EXPECT_GE(info.singular_values(i - 1), info.singular_values(i));
  }
}

TEST(SchmidtRank, ProductStatesHaveRankOne) {
  RandomStream rs(3);
  for (int trial = 0; trial < 100; ++trial)
    EXPECT_EQ(schmidt_rank(random_product_state(2 + trial % 5, 2 + trial % 3, rs)).rank, 1);
}

TEST(SchmidtRank, LocalUnitaryInvariance) {
  RandomStream rs(4);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + trial % 5;
    const int n = 2 + (trial * 3) % 5;
    const int k = 1 + trial % std::min(m, n);
    const auto v = with_schmidt_rank(m, n, k, rs);
    ASSERT_EQ(schmidt_rank(v).rank, k);
    const auto w = apply_local(v, random_unitary(m, rs), random_unitary(n, rs));
    EXPECT_EQ(schmidt_rank(w).rank, k);
  }
}

TEST(Ensemble, Validation) {
  const auto v = max_entangled(2);
  EXPECT_THROW(EnsembleState(2, 2, {}), Error);
  EXPECT_THROW(EnsembleState(2, 2, {{0.5, v}}), Error);
  EXPECT_THROW(EnsembleState(2, 2, {{-0.5, v}, {1.5, v}}), Error);
  EXPECT_THROW(EnsembleState(3, 3, {{1.0, v}}), Error);
  EXPECT_NO_THROW(EnsembleState(2, 2, {{0.25, v}, {0.75, v}}));
}

TEST(Ensemble, ExampleOne) {
  const auto e = example1(1.0, 1.0);
  ASSERT_EQ(e.members().size(), 2u);
  EXPECT_DOUBLE_EQ(e.members()[0].weight, 0.5);
  EXPECT_DOUBLE_EQ(e.members()[1].weight, 0.5);
  EXPECT_EQ(e.members()[0].state.amplitudes(), example1_v1().amplitudes());
  EXPECT_EQ(e.members()[1].state.amplitudes(), example1_v2().amplitudes());
  EXPECT_EQ(e.rank(), 2);

  const auto skewed = example1(1.0, 3.0);
  EXPECT_DOUBLE_EQ(skewed.members()[0].weight, 0.25);
  EXPECT_THROW(example1(0.0, 1.0), Error);
}

TEST(Ensemble, ExampleTwo) {
  const auto e = example2(1.0, 1.0, 1.0, 5);
  ASSERT_EQ(e.members().size(), 3u);
  EXPECT_EQ(e.members()[0].state.amplitudes(), max_entangled(7).amplitudes());
  EXPECT_EQ(e.rank(), 3);
  const auto again = example2(1.0, 1.0, 1.0, 5);
  EXPECT_EQ(e.members()[1].state.amplitudes(), again.members()[1].state.amplitudes());
  const auto other = example2(1.0, 1.0, 1.0, 6);
  EXPECT_NE(e.members()[1].state.amplitudes(), other.members()[1].state.amplitudes());
  EXPECT_THROW(example2(1.0, -1.0, 1.0, 5), Error);
}

TEST(FromDensity, MaximallyMixed) {
  const int m = 2, n = 3;
  const ComplexMatrix rho = ComplexMatrix::Identity(6, 6) / 6.0;
  const auto e = from_density(rho, m, n);
  ASSERT_EQ(e.members().size(), 6u);
  EXPECT_EQ(e.rank(), 6);
  for (const auto& mem : e.members()) EXPECT_NEAR(mem.weight, 1.0 / 6.0, 1e-12);
}

TEST(FromDensity, ExampleOneRecoversMembers) {
  const auto e = from_density(example1(1.0, 1.0).density(), 5, 5);
  ASSERT_EQ(e.members().size(), 2u);
  EXPECT_EQ(e.rank(), 2);
  const ComplexVector v1 = example1_v1().amplitudes();
  const ComplexVector v2 = example1_v2().amplitudes();
  for (const auto& mem : e.members()) {
    EXPECT_NEAR(mem.weight, 0.5, 1e-12);
    const double o1 = std::abs(v1.dot(mem.state.amplitudes()));
    const double o2 = std::abs(v2.dot(mem.state.amplitudes()));
    EXPECT_NEAR(std::max(o1, o2), 1.0, 1e-10);
    EXPECT_NEAR(std::min(o1, o2), 0.0, 1e-10);
  }
}

TEST(FromDensity, BellProjector) {
  const ComplexVector b = max_entangled(2).amplitudes();
  const auto e = from_density(b * b.adjoint(), 2, 2);
  ASSERT_EQ(e.members().size(), 1u);
  EXPECT_NEAR(e.members()[0].weight, 1.0, 1e-12);
}

TEST(FromDensity, DistinctErrors) {
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4) / 4.0;
  EXPECT_EQ(code_of([&] { from_density(ComplexMatrix::Identity(3, 3) / 3.0, 2, 2); }),
            ErrorCode::WrongShape);
  ComplexMatrix nh = id;
  nh(0, 1) = 1e-3;
  EXPECT_EQ(code_of([&] { from_density(nh, 2, 2); }), ErrorCode::NotHermitian);
  EXPECT_EQ(code_of([&] { from_density(id * 2.0, 2, 2); }), ErrorCode::TraceMismatch);
  ComplexMatrix neg = ComplexMatrix::Zero(4, 4);
  neg(0, 0) = 1.1;
  neg(1, 1) = -0.1;
  EXPECT_EQ(code_of([&] { from_density(neg, 2, 2); }), ErrorCode::NotPositiveSemidefinite);
}

TEST(FromDensity, RoundTripPreservesDensity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto e = random_rank_r_state(3, 4, 1 + int(seed % 7), seed);
    const ComplexMatrix rho = e.density();
    const auto back = from_density(rho, 3, 4);
    EXPECT_EQ(back.rank(), e.rank());
    EXPECT_LE((back.density() - rho).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-9);
  }
}

TEST(RangeBasis, Cases) {
  const auto v = max_entangled(3);
  const EnsembleState dup(3, 3, {{0.5, v}, {0.5, v}});
  EXPECT_EQ(dup.rank(), 1);
  EXPECT_EQ(range_basis(dup).size(), 1u);

  const auto ex1 = range_basis(example1(1.0, 1.0));
  ASSERT_EQ(ex1.size(), 2u);
  EXPECT_EQ(ex1[0].amplitudes(), example1_v1().amplitudes());
  EXPECT_EQ(ex1[1].amplitudes(), example1_v2().amplitudes());

  RandomStream rs(6);
  const auto a = random_pure_state(3, 3, rs);
  const auto b = random_pure_state(3, 3, rs);
  const auto c = random_pure_state(3, 3, rs);
  const auto avg = PureState::normalized(3, 3, (a.amplitudes() + b.amplitudes()) / 2.0);
  const EnsembleState e(3, 3, {{0.25, a}, {0.25, b}, {0.25, avg}, {0.25, c}});
  EXPECT_EQ(e.rank(), 3);
  const auto basis = range_basis(e);
  EXPECT_EQ(basis.size(), 3u);
  std::vector<ComplexVector> cols;
  for (const auto& m : e.members()) cols.push_back(m.state.amplitudes());
  EXPECT_EQ(numerical_rank(stack_columns(cols)), 3);
}

TEST(RandomStates, RequestedRank) {
  const int cases[][3] = {{4, 4, 3}, {5, 5, 7}, {6, 6, 6}};
  for (const auto& c : cases)
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto e = random_rank_r_state(c[0], c[1], c[2], seed);
      EXPECT_EQ(e.rank(), c[2]);
      EXPECT_EQ(int(e.members().size()), c[2]);
    }
}

TEST(RandomStates, DeterministicAndValid) {
  const auto a = random_rank_r_state(5, 5, 7, 77);
  const auto b = random_rank_r_state(5, 5, 7, 77);
  for (std::size_t i = 0; i < a.members().size(); ++i) {
    EXPECT_EQ(a.members()[i].weight, b.members()[i].weight);
    EXPECT_EQ(a.members()[i].state.amplitudes(), b.members()[i].state.amplitudes());
  }
  const auto back = from_density(a.density(), 5, 5);
  EXPECT_EQ(back.rank(), 7);
  EXPECT_NEAR(a.density().trace().real(), 1.0, 1e-9);

  const auto single = random_rank_r_state(2, 2, 1, 3);
  EXPECT_EQ(single.rank(), 1);
  EXPECT_DOUBLE_EQ(single.members()[0].weight, 1.0);

  EXPECT_THROW(random_rank_r_state(2, 2, 0, 1), Error);
  EXPECT_THROW(random_rank_r_state(2, 2, 5, 1), Error);
}

TEST(Ensemble, SwapAndLocalUnitaryKeepRank) {
  RandomStream rs(8);
  const auto e = random_rank_r_state(3, 4, 5, 12);
  const auto s = swap_parties(e);
  EXPECT_EQ(s.m(), 4);
  EXPECT_EQ(s.n(), 3);
  EXPECT_EQ(s.rank(), 5);
  const auto l = apply_local(e, random_unitary(3, rs), random_unitary(4, rs));
  EXPECT_EQ(l.rank(), 5);
  const ComplexMatrix rho = e.density();
  const ComplexMatrix ua = random_unitary(3, rs), ub = random_unitary(4, rs);
  const ComplexMatrix u = kron(ua, ub);
  EXPECT_LE((apply_local(e, ua, ub).density() - u * rho * u.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}
