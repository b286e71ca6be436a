#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "goalfem/goals.hpp"
#include "goalfem/nlsolve.hpp"

namespace goalfem {

/// Solves A'(U)^T Z = rhs (rhs condensed); Z satisfies homogeneous constraints.
DenseVector solve_adjoint(const NonlinearSystem& system, const Space& space, const DenseVector& U,
                          const DenseVector& rhs);

/// Primal and adjoint solutions on the primal and enriched spaces.
struct EnrichedPair {
  std::shared_ptr<const Space> primal;
  std::shared_ptr<const Space> enriched;
  std::vector<Goal> goals;
  GoalCombination combination;

  DenseVector U_low;    ///< converged primal solution
  DenseVector Z_low;    ///< primal-space adjoint at U_low
  DenseVector U_high;   ///< enriched primal solution
  DenseVector Z_high;   ///< enriched adjoint at U_high
  DenseVector U_tilde;  ///< U_low embedded
  DenseVector Z_tilde;  ///< Z_low embedded

  std::vector<double> J_low;   ///< J_i(U_tilde)
  std::vector<double> J_high;  ///< J_i(U_high)
  NewtonReport enriched_report;

  std::vector<WeightedGoal> weighted_goals() const;
};

/// Enriched Newton warm-started from embed(U_low), signed weights, both
/// adjoints.
EnrichedPair solve_enriched(const FlowSystem& primal, const FlowSystem& enriched,
                            const DenseVector& U_low, const std::vector<Goal>& goals,
                            const NewtonConfig& newton);

/// Recomputes Z_low and Z_tilde after U_low changed, keeping the weights.
void update_low_order(EnrichedPair& pair, const FlowSystem& primal, const DenseVector& U_low);

struct EstimatorReport {
  double eta_p = 0.0;  ///< -A(U~)(Z2 - Z~)
  double eta_a = 0.0;  ///< J'(U~)(U2 - U~) - A'(U~)(U2 - U~, Z~)
  double eta_k = 0.0;  ///< -A(U~)(Z~)
  double eta_h = 0.0;  ///< (eta_p + eta_a) / 2

  std::vector<int> node_vertices;  ///< mesh vertex of each partition-of-unity node
  std::vector<double> node_indicators;
  std::vector<int> cells;  ///< active cell ids, ascending
  std::vector<double> cell_indicators;
};

/// -A(U)(Z) in the primal space.
double iteration_error(const FlowSystem& primal, const DenseVector& U, const DenseVector& Z);

/// Global estimator parts and their Q1 partition-of-unity localization,
/// assembled in the enriched space.
EstimatorReport estimate(const EnrichedPair& pair, const ModelInputs& inputs);

/// Splits each node value equally among the active cells having that node
/// as a corner.
std::vector<double> cell_indicators_from_nodes(const Mesh& mesh, const std::vector<int>& cells,
                                               const std::vector<int>& node_vertices,
                                               const std::vector<double>& node_values);

struct Effectivity {
  std::optional<double> total;
  std::optional<double> primal;
  std::optional<double> adjoint;
};

/// |eta_h| / |err|, |eta_p| / |err|, |eta_a| / |err|; empty when err = 0.
Effectivity effectivity(double eta_h, double eta_p, double eta_a, double reference,
                        double approximation);

}  // namespace goalfem
