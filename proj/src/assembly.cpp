#include "goalfem/assembly.hpp"

#include <algorithm>

namespace goalfem {

void LocalCondenser::reinit(const std::vector<int>& local_dofs) {
  const ConstraintSet& cs = space_->constraints();
  targets_.clear();
  for (const int d : local_dofs) {
    if (cs.is_constrained(d)) {
      const auto& masters = cs.entry(d).masters;
      targets_.insert(targets_.end(), masters.begin(), masters.end());
    } else {
      targets_.push_back(d);
    }
  }
  std::sort(targets_.begin(), targets_.end());
  targets_.erase(std::unique(targets_.begin(), targets_.end()), targets_.end());

  auto index_of = [&](int dof) {
    return static_cast<int>(std::lower_bound(targets_.begin(), targets_.end(), dof) -
                            targets_.begin());
  };
  expansion_.resize(local_dofs.size());
  for (std::size_t i = 0; i < local_dofs.size(); ++i) {
    auto& e = expansion_[i];
    e.clear();
    const int d = local_dofs[i];
    if (cs.is_constrained(d)) {
      const Constraint& c = cs.entry(d);
      for (std::size_t k = 0; k < c.masters.size(); ++k) {
        e.emplace_back(index_of(c.masters[k]), c.weights[k]);
      }
    } else {
      e.emplace_back(index_of(d), 1.0);
    }
  }
}

void LocalCondenser::scatter_vector(std::span<const double> local, DenseVector& global) const {
  for (std::size_t i = 0; i < expansion_.size(); ++i) {
    for (const auto& [t, w] : expansion_[i]) global[targets_[t]] += w * local[i];
  }
}

void LocalCondenser::scatter_matrix(std::span<const double> local, SparseMatrix& global) {
  const std::size_t n = expansion_.size();
  const std::size_t m = targets_.size();
  condensed_.assign(m * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = local[i * n + j];
      if (v == 0.0) continue;
      for (const auto& [ti, wi] : expansion_[i]) {
        for (const auto& [tj, wj] : expansion_[j]) condensed_[ti * m + tj] += wi * wj * v;
      }
    }
  }
  const auto& rp = global.row_ptr();
  const auto& ci = global.col_idx();
  auto& values = global.values();
  for (std::size_t a = 0; a < m; ++a) {
    const int row = targets_[a];
    // Both column lists are sorted: walk them together.
    int k = rp[row];
    const int end = rp[row + 1];
    for (std::size_t b = 0; b < m; ++b) {
      const int col = targets_[b];
      while (k < end && ci[k] < col) ++k;
      if (k == end || ci[k] != col) {
        throw std::logic_error("condensed entry missing from the sparsity pattern");
      }
      values[k] += condensed_[a * m + b];
    }
  }
}

SparsityPattern make_sparsity(const Space& space) {
  const int n = space.n_dofs();
  const ConstraintSet& cs = space.constraints();
  const std::vector<int> cells = space.mesh().active_cells();

  // Condensed dof lists per cell, then the cells touching each dof.
  std::vector<int> cell_ptr{0};
  std::vector<int> cell_targets;
  std::vector<int> local;
  std::vector<int> targets;
  for (const int c : cells) {
    space.cell_dofs(c, local);
    targets.clear();
    for (const int d : local) {
      if (cs.is_constrained(d)) {
        const auto& masters = cs.entry(d).masters;
        targets.insert(targets.end(), masters.begin(), masters.end());
      } else {
        targets.push_back(d);
      }
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    cell_targets.insert(cell_targets.end(), targets.begin(), targets.end());
    cell_ptr.push_back(static_cast<int>(cell_targets.size()));
  }
  std::vector<int> dof_ptr(n + 1, 0);
  for (const int d : cell_targets) ++dof_ptr[d + 1];
  for (int i = 0; i < n; ++i) dof_ptr[i + 1] += dof_ptr[i];
  std::vector<int> dof_cells(cell_targets.size());
  {
    std::vector<int> next(dof_ptr.begin(), dof_ptr.end() - 1);
    for (std::size_t c = 0; c + 1 < cell_ptr.size(); ++c) {
      for (int k = cell_ptr[c]; k < cell_ptr[c + 1]; ++k) {
        dof_cells[next[cell_targets[k]]++] = static_cast<int>(c);
      }
    }
  }

  SparsityPattern pattern(n, n);
  std::vector<int> cols;
  for (int row = 0; row < n; ++row) {
    cols.assign(1, row);
    if (!cs.is_constrained(row)) {
      for (int k = dof_ptr[row]; k < dof_ptr[row + 1]; ++k) {
        const int c = dof_cells[k];
        cols.insert(cols.end(), cell_targets.begin() + cell_ptr[c],
                    cell_targets.begin() + cell_ptr[c + 1]);
      }
      std::sort(cols.begin(), cols.end());
      cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    }
    pattern.add_row(row, cols);
  }
  return pattern;
}

void set_constrained_diagonal(const Space& space, SparseMatrix& A) {
  for (const int d : space.constraints().constrained_dofs()) {
    const long k = A.find(d, d);
    if (k < 0) throw std::logic_error("constrained diagonal missing from the pattern");
    A.values()[k] = 1.0;
  }
}

}  // namespace goalfem
