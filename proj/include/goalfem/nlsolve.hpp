#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "goalfem/linalg.hpp"
#include "goalfem/model.hpp"

namespace goalfem {

/// A(U) = 0 with a Jacobian; residual() may throw to signal an invalid state.
class NonlinearSystem {
 public:
  virtual ~NonlinearSystem() = default;
  virtual DenseVector residual(const DenseVector& u) const = 0;
  virtual SparseMatrix jacobian(const DenseVector& u) const = 0;
  /// Makes a Newton update consistent with the constraints.
  virtual void finalize_update(DenseVector& /*p*/) const {}
};

/// The discretized flow-temperature problem on one space.
class FlowSystem : public NonlinearSystem {
 public:
  FlowSystem(std::shared_ptr<const Space> space, const ModelInputs& inputs);

  DenseVector residual(const DenseVector& u) const override;
  SparseMatrix jacobian(const DenseVector& u) const override;
  void finalize_update(DenseVector& p) const override;

  const Space& space() const { return *space_; }
  std::shared_ptr<const Space> space_ptr() const { return space_; }
  const ModelInputs& inputs() const { return inputs_; }

 private:
  std::shared_ptr<const Space> space_;
  ModelInputs inputs_;
  std::shared_ptr<const SparseMatrix> pattern_;
};

struct NewtonConfig {
  double beta = 0.7;
  int max_line_search = 20;
  int max_newton = 50;
  double res_abs = 1e-12;
  double res_rel = 1e-9;
  /// Overrides max(res_abs, res_rel * |A(U0)|) when set.
  std::optional<double> tolerance;

  void validate() const;
};

struct NewtonReport {
  int newton_steps = 0;
  int line_search_steps = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  double tolerance = 0.0;
  bool converged = false;
  /// Some line search found no decrease and took the shortest step.
  bool stalled = false;
  std::vector<double> history;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

struct LineSearchResult {
  DenseVector u;
  DenseVector residual;
  double residual_norm = 0.0;
  int backtracks = 0;
  bool decreased = false;
};

/// U + beta^k P for the smallest k <= max_iter with |A(U + beta^k P)| < |A(U)|.
/// A failing residual evaluation counts as no decrease.
LineSearchResult line_search(const NonlinearSystem& system, const DenseVector& u,
                             const DenseVector& p, double residual_norm, double beta,
                             int max_iter);

struct NewtonResult {
  DenseVector u;
  NewtonReport report;
};

/// Newton's method with backtracking; throws DivergenceError when the
/// tolerance is not reached within max_newton steps.
NewtonResult newton_solve(const NonlinearSystem& system, const DenseVector& u0,
                          const NewtonConfig& config);

}  // namespace goalfem
