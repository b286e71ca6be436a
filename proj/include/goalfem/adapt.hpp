#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "goalfem/dwr.hpp"
#include "goalfem/presets.hpp"

namespace goalfem {

struct AdaptConfig {
  double tol = 1e-8;
  int max_ndofs = 200000;
  double mark_fraction = 0.10;
  int max_levels = 40;
  double eta_k_threshold = 1e-10;
  /// Newton re-solves with a 100x tighter tolerance allowed per level.
  int max_reentries = 4;
  /// Level 0 only: if Newton from the Dirichlet lift fails, ramp the laser
  /// amplitudes up from a fraction and warm-start each stage.
  bool source_ramp = true;
  NewtonConfig newton;

  void validate() const;
};

struct LevelRecord {
  int level = 0;
  int n_dofs = 0;
  int n_enriched_dofs = 0;
  int n_cells = 0;
  std::vector<double> J;       ///< J_i(U_h), evaluated in the enriched space
  std::vector<double> J_high;  ///< J_i(U_h^(2))
  GoalCombination combination;
  EstimatorReport estimator;
  NewtonReport newton;
  NewtonReport enriched_newton;
  int reentries = 0;
  /// Source-ramp stages used at level 0; 0 when Newton from the lift converged.
  int ramp_stages = 0;
  /// Filled when a reference is known.
  std::vector<double> abs_error;
  std::vector<double> rel_error;
  std::optional<double> combined_error;
  Effectivity eff;
};

struct AdaptResult {
  std::vector<LevelRecord> levels;
  std::optional<std::vector<double>> reference;
  std::string reference_source = "none";
  bool diverged = false;
  std::string failure;
};

/// Cells sorted by |indicator| descending (ties: lower id first); the first
/// ceil(fraction * n) are returned in ascending id order.
std::vector<int> mark_top_fraction(const std::vector<int>& cells,
                                   const std::vector<double>& indicators, double fraction);

struct RampResult {
  NewtonResult result;
  int stages = 0;
};

/// Newton on the full problem, warm-started through a sequence of scaled
/// laser amplitudes s in (0, 1]. The final tolerance is the one Newton
/// would use from u0 on the full problem.
RampResult ramped_newton(std::shared_ptr<const Space> space, const ModelInputs& inputs,
                         const DenseVector& u0, const NewtonConfig& config);

/// Fills the error and effectivity fields of a record from a reference.
void apply_reference(LevelRecord& rec, const std::vector<double>& reference);

using LevelCallback =
    std::function<void(const LevelRecord&, const Space& primal, const DenseVector& U)>;

/// Solve, estimate, mark and refine until the estimate, the dof budget or
/// the level budget stops the loop.
AdaptResult adaptive_loop(const Problem& problem, const AdaptConfig& config,
                          const LevelCallback& on_level = {});

}  // namespace goalfem
