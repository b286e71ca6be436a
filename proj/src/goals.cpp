#include "goalfem/goals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "goalfem/assembly.hpp"

namespace goalfem {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string point_text(Point p) {
  std::ostringstream os;
  os << "(" << p.x << "," << p.y << ")";
  return os.str();
}

bool is_volume(const Goal& g) {
  return std::holds_alternative<MeanVelocityMagnitude>(g) ||
         std::holds_alternative<MeanTemperature>(g);
}

/// Gauss points on every boundary edge; coeff carries the outward normal
/// times the line weight.
std::vector<GoalTerm> boundary_terms(const Space& space, int boost, double weight) {
  const Mesh& mesh = space.mesh();
  const GaussRule1D g = gauss_legendre(space.degrees().max() + 1 + boost);
  std::vector<GoalTerm> terms;
  for (const int c : mesh.active_cells()) {
    const auto& v = mesh.cell(c).vertices;
    for (int e = 0; e < 4; ++e) {
      const int a = v[e];
      const int b = v[(e + 1) % 4];
      if (!mesh.is_boundary_edge(a, b)) continue;
      const Point tau = mesh.vertex(b).pos - mesh.vertex(a).pos;
      const double len = std::hypot(tau.x, tau.y);
      const std::array<double, 2> n{tau.y / len, -tau.x / len};
      for (std::size_t q = 0; q < g.points.size(); ++q) {
        const double t = g.points[q];
        Point xi;
        switch (e) {
          case 0: xi = {t, 0.0}; break;
          case 1: xi = {1.0, t}; break;
          case 2: xi = {1.0 - t, 1.0}; break;
          default: xi = {0.0, 1.0 - t};
        }
        GoalTerm term;
        term.cell = c;
        term.xi = xi;
        term.weight = weight * g.weights[q] * len;
        term.coeff.grad_theta = n;
        terms.push_back(term);
      }
    }
  }
  return terms;
}

GoalTerm point_term(const Space& space, Point x, double weight, Sample coeff) {
  const CellPoint cp = locate_point(space.mesh(), x);
  return {cp.cell, cp.xi, weight, coeff};
}

/// Terms grouped per cell so one CellValues serves all points of a cell.
template <class F>
void for_each_term_cell(const Space& space, const std::vector<GoalTerm>& terms, F&& f) {
  std::map<int, std::vector<const GoalTerm*>> by_cell;
  for (const GoalTerm& t : terms) by_cell[t.cell].push_back(&t);
  for (const auto& [cell, list] : by_cell) {
    QuadratureRule rule;
    for (const GoalTerm* t : list) {
      rule.points.push_back(t->xi);
      rule.weights.push_back(1.0);
    }
    CellValues cv(space, std::move(rule));
    cv.reinit(cell);
    f(cv, list);
  }
}

}  // namespace

std::string goal_label(const Goal& goal) {
  return std::visit(
      overloaded{
          [](const MeanVelocityMagnitude&) { return std::string("mean_speed"); },
          [](const MeanTemperature&) { return std::string("mean_temperature"); },
          [](const PointTemperature& g) { return "temperature" + point_text(g.x); },
          [](const PointVelocityComponent& g) {
            return "v" + std::to_string(g.axis + 1) + point_text(g.x);
          },
          [](const PointSpeedSquared& g) { return "speed_squared" + point_text(g.x); },
          [](const PressureDifference& g) {
            return "pressure_difference" + point_text(g.a) + point_text(g.b);
          },
          [](const BoundaryHeatFlux&) { return std::string("boundary_heat_flux"); },
      },
      goal);
}

double evaluate(const Goal& goal, const Space& space, const DenseVector& U, int boost) {
  if (U.size() != static_cast<std::size_t>(space.n_dofs())) {
    throw std::invalid_argument("goal evaluation: state size does not match the space");
  }
  if (is_volume(goal)) {
    const double eps =
        std::holds_alternative<MeanVelocityMagnitude>(goal) ? std::get<0>(goal).epsilon : 0.0;
    const bool speed = std::holds_alternative<MeanVelocityMagnitude>(goal);
    CellValues cv(space, quadrature_for(space.degrees(), boost));
    long double sum = 0.0L;
    for (const int c : space.mesh().active_cells()) {
      cv.reinit(c);
      for (std::size_t q = 0; q < cv.n_points(); ++q) {
        const Sample u = cv.sample(U, q);
        const double f =
            speed ? std::sqrt(u.v[0] * u.v[0] + u.v[1] * u.v[1] + eps * eps) : u.theta;
        sum += cv.JxW(q) * f;
      }
    }
    return static_cast<double>(sum) / space.mesh().active_area();
  }
  return std::visit(
      overloaded{
          [&](const PointTemperature& g) { return evaluate_at_point(space, U, g.x).theta; },
          [&](const PointVelocityComponent& g) {
            return evaluate_at_point(space, U, g.x).v.at(g.axis);
          },
          [&](const PointSpeedSquared& g) {
            const Sample s = evaluate_at_point(space, U, g.x);
            return s.v[0] * s.v[0] + s.v[1] * s.v[1];
          },
          [&](const PressureDifference& g) {
            return evaluate_at_point(space, U, g.a).p - evaluate_at_point(space, U, g.b).p;
          },
          [&](const BoundaryHeatFlux&) {
            long double sum = 0.0L;
            for_each_term_cell(space, boundary_terms(space, boost, 1.0),
                               [&](const CellValues& cv, const std::vector<const GoalTerm*>& l) {
                                 for (std::size_t q = 0; q < l.size(); ++q) {
                                   sum += l[q]->weight * pair(l[q]->coeff, cv.sample(U, q));
                                 }
                               });
            return static_cast<double>(sum);
          },
          [](const auto&) -> double { throw std::logic_error("unhandled goal kind"); },
      },
      goal);
}

std::vector<double> evaluate_all(std::span<const Goal> goals, const Space& space,
                                 const DenseVector& U, int boost) {
  std::vector<double> out;
  for (const Goal& g : goals) out.push_back(evaluate(g, space, U, boost));
  return out;
}

LinearizedGoal::LinearizedGoal(std::span<const WeightedGoal> goals, const Space& space,
                               const DenseVector& U, int boost)
    : boost_(boost) {
  for (const WeightedGoal& wg : goals) {
    if (!is_volume(wg.goal)) {
      const double w = wg.weight;
      std::visit(overloaded{
                     [&](const PointTemperature& g) {
                       Sample c;
                       c.theta = 1.0;
                       terms_.push_back(point_term(space, g.x, w, c));
                     },
                     [&](const PointVelocityComponent& g) {
                       Sample c;
                       c.v.at(g.axis) = 1.0;
                       terms_.push_back(point_term(space, g.x, w, c));
                     },
                     [&](const PointSpeedSquared& g) {
                       const Sample s = evaluate_at_point(space, U, g.x);
                       Sample c;
                       c.v = {2.0 * s.v[0], 2.0 * s.v[1]};
                       terms_.push_back(point_term(space, g.x, w, c));
                     },
                     [&](const PressureDifference& g) {
                       Sample c;
                       c.p = 1.0;
                       terms_.push_back(point_term(space, g.a, w, c));
                       terms_.push_back(point_term(space, g.b, -w, c));
                     },
                     [&](const BoundaryHeatFlux&) {
                       const auto b = boundary_terms(space, boost, w);
                       terms_.insert(terms_.end(), b.begin(), b.end());
                     },
                     [](const auto&) {},
                 },
                 wg.goal);
    } else {
      volume_goals_.push_back(wg);
      has_volume_ = true;
    }
  }
  if (has_volume_) inv_area_ = 1.0 / space.mesh().active_area();
}

Sample LinearizedGoal::volume_coefficient(const Sample& u) const {
  Sample c;
  for (const WeightedGoal& wg : volume_goals_) {
    const double s = wg.weight * inv_area_;
    if (const auto* g = std::get_if<MeanVelocityMagnitude>(&wg.goal)) {
      const double norm =
          std::sqrt(u.v[0] * u.v[0] + u.v[1] * u.v[1] + g->epsilon * g->epsilon);
      c.v[0] += s * u.v[0] / norm;
      c.v[1] += s * u.v[1] / norm;
    } else {
      c.theta += s;
    }
  }
  return c;
}

DenseVector goal_derivative(const LinearizedGoal& lin, const Space& space, const DenseVector& U) {
  DenseVector out(space.n_dofs(), 0.0);
  LocalCondenser condenser(space);
  std::vector<double> local;
  if (lin.has_volume()) {
    CellValues cv(space, quadrature_for(space.degrees(), lin.boost()));
    for (const int c : space.mesh().active_cells()) {
      cv.reinit(c);
      local.assign(cv.n_local(), 0.0);
      for (std::size_t q = 0; q < cv.n_points(); ++q) {
        const Sample coeff = lin.volume_coefficient(cv.sample(U, q));
        for (int i = 0; i < cv.n_local(); ++i) {
          local[i] += cv.JxW(q) * pair(coeff, cv.basis_sample(i, q));
        }
      }
      condenser.reinit(cv.dofs());
      condenser.scatter_vector(local, out);
    }
  }
  for_each_term_cell(space, lin.terms(),
                     [&](const CellValues& cv, const std::vector<const GoalTerm*>& list) {
                       local.assign(cv.n_local(), 0.0);
                       for (std::size_t q = 0; q < list.size(); ++q) {
                         for (int i = 0; i < cv.n_local(); ++i) {
                           local[i] += list[q]->weight * pair(list[q]->coeff, cv.basis_sample(i, q));
                         }
                       }
                       condenser.reinit(cv.dofs());
                       condenser.scatter_vector(local, out);
                     });
  return out;
}

DenseVector goal_derivative(const Goal& goal, const Space& space, const DenseVector& U,
                            int boost) {
  const WeightedGoal wg{goal, 1.0};
  return goal_derivative(LinearizedGoal({&wg, 1}, space, U, boost), space, U);
}

double goal_pairing(const LinearizedGoal& lin, const Space& space, const DenseVector& U,
                    const DenseVector& W) {
  long double sum = 0.0L;
  if (lin.has_volume()) {
    CellValues cv(space, quadrature_for(space.degrees(), lin.boost()));
    for (const int c : space.mesh().active_cells()) {
      cv.reinit(c);
      for (std::size_t q = 0; q < cv.n_points(); ++q) {
        sum += cv.JxW(q) * pair(lin.volume_coefficient(cv.sample(U, q)), cv.sample(W, q));
      }
    }
  }
  for_each_term_cell(space, lin.terms(),
                     [&](const CellValues& cv, const std::vector<const GoalTerm*>& list) {
                       for (std::size_t q = 0; q < list.size(); ++q) {
                         sum += list[q]->weight * pair(list[q]->coeff, cv.sample(W, q));
                       }
                     });
  return static_cast<double>(sum);
}

double GoalCombination::combine(std::span<const double> values) const {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("combined functional: value count differs from weight count");
  }
  long double sum = 0.0L;
  for (std::size_t i = 0; i < values.size(); ++i) sum += weights[i] * values[i];
  return static_cast<double>(sum);
}

GoalCombination combine(std::span<const double> J_low, std::span<const double> J_high,
                        std::span<const double> omega) {
  if (J_low.size() != J_high.size() || (!omega.empty() && omega.size() != J_low.size())) {
    throw std::invalid_argument("combine: goal lists are not aligned");
  }
  GoalCombination c;
  for (std::size_t i = 0; i < J_low.size(); ++i) {
    const double w = !omega.empty()              ? omega[i]
                     : std::abs(J_low[i]) > 1e-12 ? 1.0 / std::abs(J_low[i])
                                                  : 1.0;
    const double diff = J_high[i] - J_low[i];
    const double sign = diff > 0.0 ? 1.0 : diff < 0.0 ? -1.0 : 1.0;
    c.omega.push_back(w);
    c.weights.push_back(w * sign);
  }
  return c;
}

}  // namespace goalfem
