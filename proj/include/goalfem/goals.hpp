#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "goalfem/fespace.hpp"

namespace goalfem {

/// Mean of sqrt(v.v + eps^2) over the domain.
struct MeanVelocityMagnitude {
  double epsilon = 1e-10;
};
struct MeanTemperature {};
struct PointTemperature {
  Point x;
};
struct PointVelocityComponent {
  Point x;
  int axis = 0;
};
struct PointSpeedSquared {
  Point x;
};
struct PressureDifference {
  Point a;
  Point b;
};
/// Integral of grad(theta).n over the boundary.
struct BoundaryHeatFlux {};

using Goal = std::variant<MeanVelocityMagnitude, MeanTemperature, PointTemperature,
                          PointVelocityComponent, PointSpeedSquared, PressureDifference,
                          BoundaryHeatFlux>;

std::string goal_label(const Goal& goal);

double evaluate(const Goal& goal, const Space& space, const DenseVector& U,
                int boost = kNonlinearBoost);
std::vector<double> evaluate_all(std::span<const Goal> goals, const Space& space,
                                 const DenseVector& U, int boost = kNonlinearBoost);

struct WeightedGoal {
  Goal goal;
  double weight = 1.0;
};

/// A test-function evaluation at a single point of one cell:
/// contributes weight * pair(coeff, Psi(x)).
struct GoalTerm {
  int cell = -1;
  Point xi;
  double weight = 0.0;
  Sample coeff;
};

/// Derivative of sum_i weight_i J_i at a fixed state, split into a volume
/// integrand and a list of point and boundary terms.
class LinearizedGoal {
 public:
  LinearizedGoal(std::span<const WeightedGoal> goals, const Space& space, const DenseVector& U,
                 int boost = kNonlinearBoost);

  bool has_volume() const { return has_volume_; }
  /// Volume coefficient at a point where the state takes the value u.
  Sample volume_coefficient(const Sample& u) const;
  const std::vector<GoalTerm>& terms() const { return terms_; }
  int boost() const { return boost_; }

 private:
  std::vector<WeightedGoal> volume_goals_;
  double inv_area_ = 1.0;
  bool has_volume_ = false;
  int boost_;
  std::vector<GoalTerm> terms_;
};

/// Condensed vector J'(U)(Phi_i), zero on constrained rows.
DenseVector goal_derivative(const LinearizedGoal& lin, const Space& space, const DenseVector& U);
DenseVector goal_derivative(const Goal& goal, const Space& space, const DenseVector& U,
                            int boost = kNonlinearBoost);

/// J'(U)(W) for an arbitrary coefficient vector W, evaluated by quadrature.
double goal_pairing(const LinearizedGoal& lin, const Space& space, const DenseVector& U,
                    const DenseVector& W);

/// Signed weights of the combined functional.
struct GoalCombination {
  std::vector<double> omega;
  std::vector<double> weights;

  double combine(std::span<const double> values) const;
};

/// omega defaults to 1/|J_i(low)| (1 for |J_i(low)| <= 1e-12).
GoalCombination combine(std::span<const double> J_low, std::span<const double> J_high,
                        std::span<const double> omega = {});

}  // namespace goalfem
