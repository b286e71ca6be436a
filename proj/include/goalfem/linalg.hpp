#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace goalfem {

using DenseVector = std::vector<double>;

/// Row-wise column sets collected before values are stored.
class SparsityPattern {
 public:
  explicit SparsityPattern(int n_rows = 0, int n_cols = 0);

  int n_rows() const { return static_cast<int>(rows_.size()); }
  int n_cols() const { return n_cols_; }
  void add(int row, int col) { rows_[row].push_back(col); }
  void add_row(int row, std::span<const int> cols);
  /// Sorts and removes duplicate columns.
  void compress();
  const std::vector<int>& row(int r) const { return rows_[r]; }

 private:
  int n_cols_;
  std::vector<std::vector<int>> rows_;
};

/// Compressed sparse row matrix; column indices sorted and unique per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(const SparsityPattern& pattern);
  /// From (row, col, value) triplets; duplicates are summed.
  static SparseMatrix from_triplets(int n_rows, int n_cols, std::span<const int> rows,
                                    std::span<const int> cols, std::span<const double> values);
  static SparseMatrix identity(int n);

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  std::size_t nnz() const { return values_.size(); }
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Position of (row, col) in values(), or -1 if outside the pattern.
  long find(int row, int col) const;
  /// Adds to an entry of the pattern; throws if the entry is absent.
  void add(int row, int col, double value);
  double at(int row, int col) const;
  void set_zero();

  SparseMatrix transpose() const;
  bool structurally_symmetric() const;

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, int pivot)
      : std::runtime_error(what), pivot_(pivot) {}
  /// Column of the first zero pivot found in the factorization.
  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

enum class SolveMode { Direct, Transpose };

/// Sparse LU factorization. The matrix must outlive the factorization,
/// since the solve phase uses it for iterative refinement.
class LUFactorization {
 public:
  explicit LUFactorization(const SparseMatrix& A);
  ~LUFactorization();
  LUFactorization(const LUFactorization&) = delete;
  LUFactorization& operator=(const LUFactorization&) = delete;
  LUFactorization(LUFactorization&& other) noexcept;
  LUFactorization& operator=(LUFactorization&& other) noexcept;

  DenseVector solve(const DenseVector& b, SolveMode mode = SolveMode::Direct) const;
  int size() const { return A_->n_rows(); }

 private:
  void release();

  const SparseMatrix* A_ = nullptr;
  void* numeric_ = nullptr;
};

DenseVector solve(const SparseMatrix& A, const DenseVector& b,
                  SolveMode mode = SolveMode::Direct);

DenseVector spmv(const SparseMatrix& A, const DenseVector& x);
/// A^T x without forming the transpose.
DenseVector spmv_transpose(const SparseMatrix& A, const DenseVector& x);
/// y += a * x
void axpy(double a, const DenseVector& x, DenseVector& y);
double dot(const DenseVector& x, const DenseVector& y);
double norm2(const DenseVector& x);

}  // namespace goalfem
