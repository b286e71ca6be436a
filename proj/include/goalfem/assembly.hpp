#pragma once

#include <span>
#include <utility>
#include <vector>

#include "goalfem/fespace.hpp"
#include "goalfem/linalg.hpp"

namespace goalfem {

/// Maps the local dofs of one cell onto the unconstrained global dofs they
/// depend on, so that local contributions are condensed while scattering.
class LocalCondenser {
 public:
  explicit LocalCondenser(const Space& space) : space_(&space) {}

  void reinit(const std::vector<int>& local_dofs);
  /// Sorted unconstrained global dofs touched by the cell.
  const std::vector<int>& targets() const { return targets_; }

  void scatter_vector(std::span<const double> local, DenseVector& global) const;
  /// Local matrix in row-major n_local x n_local layout.
  void scatter_matrix(std::span<const double> local, SparseMatrix& global);

 private:
  const Space* space_;
  std::vector<int> targets_;
  // per local dof: (index into targets_, weight)
  std::vector<std::vector<std::pair<int, double>>> expansion_;
  std::vector<double> condensed_;
};

/// Pattern of the condensed operator: couplings between unconstrained dofs
/// sharing a cell, plus the diagonal of every constrained dof.
SparsityPattern make_sparsity(const Space& space);

/// Puts 1 on the diagonal of every constrained row.
void set_constrained_diagonal(const Space& space, SparseMatrix& A);

}  // namespace goalfem
