#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "schmidt/error.hpp"
#include "schmidt/linalg.hpp"
#include "schmidt/states.hpp"

using namespace schmidt;

namespace {

ComplexMatrix random_matrix(int rows, int cols, RandomStream& rs) {
  ComplexMatrix a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = rs.complex_normal();
  return a;
}

// rows x cols matrix of exact rank k with singular values in [1, 2].
ComplexMatrix matrix_of_rank(int rows, int cols, int k, RandomStream& rs) {
  const ComplexMatrix u = random_unitary(rows, rs);
  const ComplexMatrix v = random_unitary(cols, rs);
  ComplexMatrix d = ComplexMatrix::Zero(rows, cols);
  for (int i = 0; i < k; ++i) d(i, i) = 1.0 + rs.uniform();
  return u * d * v.adjoint();
}

ComplexMatrix random_hermitian(int dim, RandomStream& rs) {
  const ComplexMatrix a = random_matrix(dim, dim, rs);
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST(NumericalRank, ZeroAndIdentity) {
  EXPECT_EQ(numerical_rank(ComplexMatrix::Zero(3, 3)), 0);
  EXPECT_EQ(numerical_rank(ComplexMatrix::Identity(5, 5)), 5);
}

TEST(NumericalRank, ExampleOneStackMatchesExactElimination) {
  // Rows of the coefficient matrices of v1 and v2 stacked: 10 x 5.
  ComplexMatrix stack(10, 5);
  stack.topRows(5) = coefficient_matrix(example1_v1());
  stack.bottomRows(5) = coefficient_matrix(example1_v2());

  // Scale v1's rows by sqrt(2) and v2's by 2 so every entry is an integer.
  ComplexMatrix scaled = stack;
  scaled.topRows(5) *= std::sqrt(2.0);
  scaled.bottomRows(5) *= 2.0;
  const int exact = oracle::exact_rank(oracle::scaled_integers(scaled, 1.0));
  EXPECT_EQ(exact, 5);
  EXPECT_EQ(numerical_rank(stack), exact);
}

TEST(NumericalRank, RejectsNonFinite) {
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  a(1, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    numerical_rank(a);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(NumericalRank, PolicyValidation) {
  EXPECT_THROW(numerical_rank(ComplexMatrix::Identity(2, 2), RankPolicy{0.0, 0.0}), Error);
  EXPECT_THROW(numerical_rank(ComplexMatrix::Identity(2, 2), RankPolicy{1e-12, -1.0}), Error);
  // The absolute floor wins when it is above the relative cutoff.
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-3;
  EXPECT_EQ(numerical_rank(d), 2);
  EXPECT_EQ(numerical_rank(d, RankPolicy{1e-12, 1e-2}), 1);
}

TEST(NumericalRank, AgreesWithExactOracleOnIntegerMatrices) {
  RandomStream rs(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 2 + int(rs.uniform() * 6);
    const int cols = 2 + int(rs.uniform() * 6);
    const int k = 1 + int(rs.uniform() * std::min(rows, cols));
    // Integer product of a rows x k and a k x cols matrix with small entries.
    oracle::IntMatrix a(std::size_t(rows), std::vector<std::int64_t>(std::size_t(cols), 0));
    std::vector<std::vector<int>> l(std::size_t(rows), std::vector<int>(std::size_t(k), 0));
    std::vector<std::vector<int>> r(std::size_t(k), std::vector<int>(std::size_t(cols), 0));
    for (auto& row : l)
      for (auto& x : row) x = int(rs.uniform() * 7) - 3;
    for (auto& row : r)
      for (auto& x : row) x = int(rs.uniform() * 7) - 3;
    ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        std::int64_t s = 0;
        for (int q = 0; q < k; ++q) s += l[std::size_t(i)][std::size_t(q)] * r[std::size_t(q)][std::size_t(j)];
        a[std::size_t(i)][std::size_t(j)] = s;
        m(i, j) = double(s);
      }
    EXPECT_EQ(numerical_rank(m), oracle::exact_rank(a)) << "trial " << trial;
  }
}

TEST(NumericalRank, InvariantUnderAdjointAndUnitaries) {
  RandomStream rs(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = 3 + trial % 5;
    const int cols = 2 + (trial * 3) % 6;
    const int k = 1 + trial % std::min(rows, cols);
    const ComplexMatrix a = matrix_of_rank(rows, cols, k, rs);
    ASSERT_EQ(numerical_rank(a), k);
    EXPECT_EQ(numerical_rank(a.adjoint()), k);
    const ComplexMatrix u = random_unitary(rows, rs);
    const ComplexMatrix v = random_unitary(cols, rs);
    EXPECT_EQ(numerical_rank(u * a * v), k);
  }
}

TEST(HermitianEig, Diagonal) {
  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d(0, 0) = 0.5;
  d(2, 2) = 0.5;
  const auto pairs = hermitian_eig(d);
  ASSERT_EQ(pairs.size(), 4u);
  EXPECT_NEAR(pairs[0].value, 0.5, 1e-15);
  EXPECT_NEAR(pairs[1].value, 0.5, 1e-15);
  EXPECT_NEAR(pairs[2].value, 0.0, 1e-15);
  EXPECT_NEAR(pairs[3].value, 0.0, 1e-15);
}

TEST(HermitianEig, ExampleOneDensity) {
  const auto rho = example1(1.0, 1.0).density();
  ASSERT_EQ(rho.rows(), 25);
  const auto pairs = hermitian_eig(rho);
  EXPECT_NEAR(pairs[0].value, 0.5, 1e-12);
  EXPECT_NEAR(pairs[1].value, 0.5, 1e-12);
  for (std::size_t i = 2; i < pairs.size(); ++i) EXPECT_NEAR(pairs[i].value, 0.0, 1e-12);
}

TEST(HermitianEig, Projector) {
  RandomStream rs(3);
  const ComplexVector v = sample_unit_vector(6, rs);
  const auto pairs = hermitian_eig(v * v.adjoint());
  EXPECT_NEAR(pairs[0].value, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(pairs[0].vector.dot(v)), 1.0, 1e-12);
  for (std::size_t i = 1; i < pairs.size(); ++i) EXPECT_NEAR(pairs[i].value, 0.0, 1e-12);
}

TEST(HermitianEig, ReconstructionAndOrthonormality) {
  RandomStream rs(17);
  for (int dim : {1, 2, 5, 16, 33, 64}) {
    const ComplexMatrix h = random_hermitian(dim, rs);
    const auto pairs = hermitian_eig(h);
    ComplexMatrix rebuilt = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix vs(dim, dim);
    for (int i = 0; i < dim; ++i) {
      rebuilt += pairs[std::size_t(i)].value * pairs[std::size_t(i)].vector *
                 pairs[std::size_t(i)].vector.adjoint();
      vs.col(i) = pairs[std::size_t(i)].vector;
      if (i) {
        EXPECT_GE(pairs[std::size_t(i) - 1].value, pairs[std::size_t(i)].value);
      }
    }
    EXPECT_LE((rebuilt - h).cwiseAbs().maxCoeff(), 1e-9) << "dim " << dim;
    EXPECT_LE((vs.adjoint() * vs - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(HermitianEig, Errors) {
  ComplexMatrix a = ComplexMatrix::Identity(3, 3);
  a(0, 1) = 1e-6;
  try {
    hermitian_eig(a);
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
    EXPECT_TRUE(e.is_input_error());
  }
  // Deviation inside the tolerance is accepted.
  a(0, 1) = 1e-11;
  EXPECT_NO_THROW(hermitian_eig(a));
  try {
    hermitian_eig(ComplexMatrix::Zero(2, 3));
    FAIL() << "expected WrongShape";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WrongShape);
  }
}

TEST(ColumnSpace, Examples) {
  ComplexVector e1 = ComplexVector::Zero(3), e2 = ComplexVector::Zero(3);
  e1(0) = 1.0;
  e2(1) = 1.0;
  const std::vector<ComplexVector> dup{e1, e1, e2};
  const auto idx = column_space_indices(dup);
  ASSERT_EQ(idx.size(), 2u);
  EXPECT_EQ(idx[0], 0u);
  EXPECT_EQ(idx[1], 2u);

  const std::vector<ComplexVector> ex1{example1_v1().amplitudes(), example1_v2().amplitudes()};
  EXPECT_EQ(column_space_basis(ex1).size(), 2u);

  EXPECT_TRUE(column_space_basis(std::vector<ComplexVector>{}).empty());
}

TEST(ColumnSpace, RandomVectorsSpanAmbientSpace) {
  RandomStream rs(23);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ComplexVector> vs;
    for (int i = 0; i < 5; ++i) vs.push_back(sample_unit_vector(3, rs));
    const auto basis = column_space_basis(vs);
    EXPECT_EQ(basis.size(), 3u);
    EXPECT_EQ(int(basis.size()), numerical_rank(stack_columns(vs)));
    // Every input lies in the span of the output.
    const ComplexMatrix b = stack_columns(basis);
    for (const auto& v : vs) {
      const ComplexVector coeffs = b.colPivHouseholderQr().solve(v);
      EXPECT_LE((b * coeffs - v).norm(), 1e-10);
    }
  }
}

TEST(ColumnSpace, DependentInputsKeepSpan) {
  RandomStream rs(29);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 6;
    std::vector<ComplexVector> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(sample_unit_vector(dim, rs));
    std::vector<ComplexVector> vs;
    for (int i = 0; i < 8; ++i) {
      ComplexVector v = ComplexVector::Zero(dim);
      for (const auto& g : gens) v += rs.complex_normal() * g;
      vs.push_back(v);
    }
    const auto basis = column_space_basis(vs);
    EXPECT_EQ(basis.size(), 3u);
    EXPECT_LE(int(basis.size()), dim);
  }
}

TEST(Sampling, UnitNormAndDeterminism) {
  RandomStream a(42), b(42);
  const ComplexVector x = sample_unit_vector(5, a);
  const ComplexVector y = sample_unit_vector(5, b);
  EXPECT_NEAR(x.norm(), 1.0, 1e-12);
  EXPECT_EQ(x, y);

  RandomStream c(7);
  const ComplexVector s = sample_unit_vector(1, c);
  EXPECT_NEAR(std::abs(s(0)), 1.0, 1e-12);

  auto d1 = RandomStream::derive(9, 4);
  auto d2 = RandomStream::derive(9, 4);
  auto d3 = RandomStream::derive(9, 5);
  const double u1 = d1.uniform();
  EXPECT_EQ(u1, d2.uniform());
  EXPECT_NE(u1, d3.uniform());
}

TEST(Sampling, FirstCoordinateMoment) {
  RandomStream rs(2024);
  double sum = 0.0;
  const int count = 10000;
  for (int i = 0; i < count; ++i) sum += std::norm(sample_unit_vector(2, rs)(0));
  const double mean = sum / count;
  EXPECT_GE(mean, 0.48);
  EXPECT_LE(mean, 0.52);
}

TEST(Sampling, RandomUnitaryIsUnitary) {
  RandomStream rs(8);
  for (int dim : {1, 2, 7}) {
    const ComplexMatrix u = random_unitary(dim, rs);
    EXPECT_LE((u.adjoint() * u - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Kron, MatchesDefinition) {
  RandomStream rs(4);
  const ComplexMatrix a = random_matrix(2, 3, rs);
  const ComplexMatrix b = random_matrix(3, 2, rs);
  const ComplexMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 6);
  ASSERT_EQ(k.cols(), 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 2; ++q) EXPECT_EQ(k(i * 3 + p, j * 2 + q), a(i, j) * b(p, q));
}
