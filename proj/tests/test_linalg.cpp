#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "goalfem/linalg.hpp"

using namespace goalfem;

namespace {

SparseMatrix random_dominant(int n, unsigned seed, bool symmetric = false) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<int> r;
  std::vector<int> c;
  std::vector<double> v;
  for (int i = 0; i < n; ++i) {
    r.push_back(i);
    c.push_back(i);
    v.push_back(8.0 + u(gen));
    for (int k = 0; k < 3; ++k) {
      const int j = static_cast<int>(gen() % n);
      if (j == i) continue;
      const double a = u(gen);
      r.push_back(i);
      c.push_back(j);
      v.push_back(a);
      if (symmetric) {
        r.push_back(j);
        c.push_back(i);
        v.push_back(a);
      }
    }
  }
  return SparseMatrix::from_triplets(n, n, r, c, v);
}

DenseVector random_vector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseVector x(n);
  for (double& e : x) e = u(gen);
  return x;
}

}  // namespace

TEST(Sparse, TripletsSumDuplicatesAndSortColumns) {
  const std::vector<int> r{0, 0, 1, 0};
  const std::vector<int> c{2, 0, 1, 2};
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const SparseMatrix A = SparseMatrix::from_triplets(2, 3, r, c, v);
  EXPECT_EQ(A.nnz(), 3u);
  EXPECT_DOUBLE_EQ(A.at(0, 2), 5.0);
  EXPECT_DOUBLE_EQ(A.at(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(A.at(0, 1), 0.0);
  EXPECT_EQ(A.find(0, 1), -1);
  for (int i = 0; i < A.n_rows(); ++i) {
    for (int k = A.row_ptr()[i] + 1; k < A.row_ptr()[i + 1]; ++k) {
      EXPECT_LT(A.col_idx()[k - 1], A.col_idx()[k]);
    }
  }
}

TEST(Sparse, AddOutsidePatternThrows) {
  SparseMatrix A = SparseMatrix::identity(3);
  EXPECT_THROW(A.add(0, 1, 1.0), std::out_of_range);
}

TEST(Sparse, TransposeAndSymmetry) {
  const SparseMatrix A = random_dominant(30, 1);
  const SparseMatrix T = A.transpose();
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 30; ++j) EXPECT_EQ(A.at(i, j), T.at(j, i));
  }
  EXPECT_TRUE(random_dominant(30, 2, true).structurally_symmetric());
}

TEST(Blas, Basics) {
  const DenseVector x = random_vector(40, 3);
  const DenseVector y = spmv(SparseMatrix::identity(40), x);
  EXPECT_EQ(x, y);
  EXPECT_DOUBLE_EQ(dot({1, 2, 3}, {4, 5, 6}), 32.0);
  EXPECT_DOUBLE_EQ(norm2(DenseVector(100, 1.0)), 10.0);
  DenseVector z{1.0, 1.0};
  axpy(2.0, {1.0, -1.0}, z);
  EXPECT_EQ(z, (DenseVector{3.0, -1.0}));
  EXPECT_THROW(dot({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST(Blas, TransposeProduct) {
  const SparseMatrix A = random_dominant(25, 4);
  const DenseVector x = random_vector(25, 5);
  const DenseVector a = spmv_transpose(A, x);
  const DenseVector b = spmv(A.transpose(), x);
  for (int i = 0; i < 25; ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
}

TEST(Solve, Identity) {
  const DenseVector b = random_vector(10, 6);
  const DenseVector x = solve(SparseMatrix::identity(10), b);
  for (int i = 0; i < 10; ++i) EXPECT_DOUBLE_EQ(x[i], b[i]);
}

TEST(Solve, TwoByTwo) {
  const std::vector<int> r{0, 0, 1, 1};
  const std::vector<int> c{0, 1, 0, 1};
  const std::vector<double> v{2.0, 1.0, 1.0, 3.0};
  const DenseVector x = solve(SparseMatrix::from_triplets(2, 2, r, c, v), {3.0, 4.0});
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 1.0, 1e-15);
}

TEST(Solve, TransposeMatchesExplicitTranspose) {
  for (int n : {5, 50}) {
    const SparseMatrix A = random_dominant(n, 7 + n);
    const DenseVector b = random_vector(n, 8);
    const DenseVector xt = solve(A, b, SolveMode::Transpose);
    const DenseVector ref = solve(A.transpose(), b);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(xt[i], ref[i], 1e-10);
  }
}

TEST(Solve, RoundTripSpd) {
  const SparseMatrix A = random_dominant(200, 9, true);
  const DenseVector x = random_vector(200, 10);
  const DenseVector y = solve(A, spmv(A, x));
  DenseVector d = y;
  axpy(-1.0, x, d);
  EXPECT_LE(norm2(d), 1e-8 * norm2(x));
}

TEST(Solve, FactorizationReuseIsBitIdentical) {
  const SparseMatrix A = random_dominant(80, 11);
  const LUFactorization lu(A);
  for (unsigned s = 0; s < 3; ++s) {
    const DenseVector b = random_vector(80, 20 + s);
    EXPECT_EQ(lu.solve(b), solve(A, b));
    EXPECT_EQ(lu.solve(b, SolveMode::Transpose), solve(A, b, SolveMode::Transpose));
  }
}

TEST(Solve, SingularMatrixReported) {
  const std::vector<int> r{0, 0, 1, 1};
  const std::vector<int> c{0, 1, 0, 1};
  const std::vector<double> v{1.0, 2.0, 2.0, 4.0};
  EXPECT_THROW(solve(SparseMatrix::from_triplets(2, 2, r, c, v), {1.0, 1.0}), SingularMatrixError);
}

TEST(Solve, SizeMismatchThrows) {
  EXPECT_THROW(solve(SparseMatrix::identity(3), {1.0, 2.0}), std::invalid_argument);
}
