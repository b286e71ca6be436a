#include "goalfem/linalg.hpp"

#include <umfpack.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace goalfem {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(got) + " vs " + std::to_string(want) + ")");
  }
}

std::string umfpack_status(int status) {
  switch (status) {
    case UMFPACK_ERROR_out_of_memory: return "out of memory";
    case UMFPACK_ERROR_invalid_matrix: return "invalid matrix";
    case UMFPACK_ERROR_argument_missing: return "argument missing";
    default: return "status " + std::to_string(status);
  }
}

}  // namespace

SparsityPattern::SparsityPattern(int n_rows, int n_cols) : n_cols_(n_cols), rows_(n_rows) {
  if (n_rows < 0 || n_cols < 0) throw std::invalid_argument("negative pattern dimensions");
}

void SparsityPattern::add_row(int row, std::span<const int> cols) {
  rows_[row].insert(rows_[row].end(), cols.begin(), cols.end());
}

void SparsityPattern::compress() {
  for (auto& r : rows_) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    if (!r.empty() && (r.front() < 0 || r.back() >= n_cols_)) {
      throw std::out_of_range("sparsity pattern column out of range");
    }
  }
}

SparseMatrix::SparseMatrix(const SparsityPattern& pattern)
    : n_rows_(pattern.n_rows()), n_cols_(pattern.n_cols()) {
  row_ptr_.assign(n_rows_ + 1, 0);
  for (int r = 0; r < n_rows_; ++r) {
    const auto& row = pattern.row(r);
    if (!std::is_sorted(row.begin(), row.end()) ||
        std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw std::invalid_argument("sparsity pattern must be compressed before use");
    }
    row_ptr_[r + 1] = row_ptr_[r] + static_cast<int>(row.size());
  }
  col_idx_.reserve(row_ptr_.back());
  for (int r = 0; r < n_rows_; ++r) {
    const auto& row = pattern.row(r);
    col_idx_.insert(col_idx_.end(), row.begin(), row.end());
  }
  values_.assign(col_idx_.size(), 0.0);
}

SparseMatrix SparseMatrix::from_triplets(int n_rows, int n_cols, std::span<const int> rows,
                                         std::span<const int> cols,
                                         std::span<const double> values) {
  require_size(cols.size(), rows.size(), "from_triplets");
  require_size(values.size(), rows.size(), "from_triplets");
  SparsityPattern pattern(n_rows, n_cols);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= n_rows) throw std::out_of_range("triplet row out of range");
    pattern.add(rows[k], cols[k]);
  }
  pattern.compress();
  SparseMatrix A(pattern);
  for (std::size_t k = 0; k < rows.size(); ++k) A.add(rows[k], cols[k], values[k]);
  return A;
}

SparseMatrix SparseMatrix::identity(int n) {
  SparsityPattern pattern(n, n);
  for (int i = 0; i < n; ++i) pattern.add(i, i);
  SparseMatrix A(pattern);
  std::fill(A.values_.begin(), A.values_.end(), 1.0);
  return A;
}

long SparseMatrix::find(int row, int col) const {
  const auto begin = col_idx_.begin() + row_ptr_[row];
  const auto end = col_idx_.begin() + row_ptr_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return -1;
  return it - col_idx_.begin();
}

void SparseMatrix::add(int row, int col, double value) {
  const long k = find(row, col);
  if (k < 0) {
    throw std::out_of_range("entry (" + std::to_string(row) + ", " + std::to_string(col) +
                            ") is not in the sparsity pattern");
  }
  values_[k] += value;
}

double SparseMatrix::at(int row, int col) const {
  const long k = find(row, col);
  return k < 0 ? 0.0 : values_[k];
}

void SparseMatrix::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix T;
  T.n_rows_ = n_cols_;
  T.n_cols_ = n_rows_;
  T.row_ptr_.assign(n_cols_ + 1, 0);
  for (const int c : col_idx_) ++T.row_ptr_[c + 1];
  std::partial_sum(T.row_ptr_.begin(), T.row_ptr_.end(), T.row_ptr_.begin());
  T.col_idx_.resize(col_idx_.size());
  T.values_.resize(values_.size());
  std::vector<int> next(T.row_ptr_.begin(), T.row_ptr_.end() - 1);
  for (int r = 0; r < n_rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int at = next[col_idx_[k]]++;
      T.col_idx_[at] = r;
      T.values_[at] = values_[k];
    }
  }
  return T;
}

bool SparseMatrix::structurally_symmetric() const {
  if (n_rows_ != n_cols_) return false;
  const SparseMatrix T = transpose();
  return T.row_ptr_ == row_ptr_ && T.col_idx_ == col_idx_;
}

// CSR arrays of A are the CSC arrays of A^T, so the UMFPACK system flags
// are swapped: A x = b is UMFPACK_At on our storage.
LUFactorization::LUFactorization(const SparseMatrix& A) : A_(&A) {
  if (A.n_rows() != A.n_cols()) throw std::invalid_argument("LU: matrix must be square");
  const int n = A.n_rows();
  double control[UMFPACK_CONTROL];
  umfpack_di_defaults(control);
  void* symbolic = nullptr;
  int status = umfpack_di_symbolic(n, n, A.row_ptr().data(), A.col_idx().data(),
                                   A.values().data(), &symbolic, control, nullptr);
  if (status != UMFPACK_OK) {
    throw std::runtime_error("LU symbolic factorization failed: " + umfpack_status(status));
  }
  status = umfpack_di_numeric(A.row_ptr().data(), A.col_idx().data(), A.values().data(), symbolic,
                              &numeric_, control, nullptr);
  umfpack_di_free_symbolic(&symbolic);
  if (status == UMFPACK_WARNING_singular_matrix) {
    int lnz = 0, unz = 0, nr = 0, nc = 0, nz_udiag = 0;
    umfpack_di_get_lunz(&lnz, &unz, &nr, &nc, &nz_udiag, numeric_);
    std::vector<double> udiag(n);
    std::vector<int> p(n), q(n);
    umfpack_di_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, p.data(),
                           q.data(), udiag.data(), nullptr, nullptr, numeric_);
    int pivot = -1;
    for (int k = 0; k < n; ++k) {
      if (udiag[k] == 0.0) {
        // The factored matrix is A^T, so its column permutation indexes rows of A.
        pivot = q[k];
        break;
      }
    }
    release();
    throw SingularMatrixError("matrix is singular to working precision (zero pivot at row " +
                                  std::to_string(pivot) + ")",
                              pivot);
  }
  if (status != UMFPACK_OK) {
    release();
    throw std::runtime_error("LU numeric factorization failed: " + umfpack_status(status));
  }
}

LUFactorization::~LUFactorization() { release(); }

LUFactorization::LUFactorization(LUFactorization&& other) noexcept
    : A_(other.A_), numeric_(other.numeric_) {
  other.numeric_ = nullptr;
}

LUFactorization& LUFactorization::operator=(LUFactorization&& other) noexcept {
  if (this != &other) {
    release();
    A_ = other.A_;
    numeric_ = other.numeric_;
    other.numeric_ = nullptr;
  }
  return *this;
}

void LUFactorization::release() {
  if (numeric_) umfpack_di_free_numeric(&numeric_);
  numeric_ = nullptr;
}

DenseVector LUFactorization::solve(const DenseVector& b, SolveMode mode) const {
  require_size(b.size(), static_cast<std::size_t>(A_->n_rows()), "LU solve");
  DenseVector x(b.size(), 0.0);
  if (b.empty()) return x;
  double control[UMFPACK_CONTROL];
  umfpack_di_defaults(control);
  const int sys = mode == SolveMode::Direct ? UMFPACK_At : UMFPACK_A;
  const int status = umfpack_di_solve(sys, A_->row_ptr().data(), A_->col_idx().data(),
                                      A_->values().data(), x.data(), b.data(), numeric_, control,
                                      nullptr);
  if (status != UMFPACK_OK) {
    throw std::runtime_error("LU solve failed: " + umfpack_status(status));
  }
  return x;
}

DenseVector solve(const SparseMatrix& A, const DenseVector& b, SolveMode mode) {
  return LUFactorization(A).solve(b, mode);
}

DenseVector spmv(const SparseMatrix& A, const DenseVector& x) {
  require_size(x.size(), static_cast<std::size_t>(A.n_cols()), "spmv");
  DenseVector y(A.n_rows(), 0.0);
  const auto& rp = A.row_ptr();
  const auto& ci = A.col_idx();
  const auto& v = A.values();
  for (int r = 0; r < A.n_rows(); ++r) {
    long double s = 0.0L;
    for (int k = rp[r]; k < rp[r + 1]; ++k) s += static_cast<long double>(v[k]) * x[ci[k]];
    y[r] = static_cast<double>(s);
  }
  return y;
}

DenseVector spmv_transpose(const SparseMatrix& A, const DenseVector& x) {
  require_size(x.size(), static_cast<std::size_t>(A.n_rows()), "spmv_transpose");
  DenseVector y(A.n_cols(), 0.0);
  const auto& rp = A.row_ptr();
  const auto& ci = A.col_idx();
  const auto& v = A.values();
  for (int r = 0; r < A.n_rows(); ++r) {
    for (int k = rp[r]; k < rp[r + 1]; ++k) y[ci[k]] += v[k] * x[r];
  }
  return y;
}

void axpy(double a, const DenseVector& x, DenseVector& y) {
  require_size(y.size(), x.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double dot(const DenseVector& x, const DenseVector& y) {
  require_size(y.size(), x.size(), "dot");
  long double s = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<long double>(x[i]) * y[i];
  return static_cast<double>(s);
}

double norm2(const DenseVector& x) {
  double scale = 0.0;
  for (const double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  long double s = 0.0L;
  for (const double v : x) {
    const long double r = v / scale;
    s += r * r;
  }
  return scale * static_cast<double>(std::sqrt(s));
}

}  // namespace goalfem
