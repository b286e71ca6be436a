#include "goalfem/dwr.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace goalfem {

DenseVector solve_adjoint(const NonlinearSystem& system, const Space& space, const DenseVector& U,
                          const DenseVector& rhs) {
  if (rhs.size() != static_cast<std::size_t>(space.n_dofs())) {
    throw std::invalid_argument("solve_adjoint: right-hand side size does not match the space");
  }
  const SparseMatrix J = system.jacobian(U);
  DenseVector Z = LUFactorization(J).solve(rhs, SolveMode::Transpose);
  space.constraints().distribute(Z, true);
  return Z;
}

std::vector<WeightedGoal> EnrichedPair::weighted_goals() const {
  std::vector<WeightedGoal> out;
  for (std::size_t i = 0; i < goals.size(); ++i) {
    out.push_back({goals[i], combination.weights.at(i)});
  }
  return out;
}

void update_low_order(EnrichedPair& pair, const FlowSystem& primal, const DenseVector& U_low) {
  const Space& P = *pair.primal;
  const Space& E = *pair.enriched;
  const int boost = primal.inputs().quadrature_boost;
  pair.U_low = U_low;
  pair.U_tilde = embed(P, E, U_low);
  pair.J_low = evaluate_all(pair.goals, E, pair.U_tilde, boost);
  const auto wg = pair.weighted_goals();
  const DenseVector rhs = goal_derivative(LinearizedGoal(wg, P, U_low, boost), P, U_low);
  pair.Z_low = solve_adjoint(primal, P, U_low, rhs);
  pair.Z_tilde = embed(P, E, pair.Z_low);
}

EnrichedPair solve_enriched(const FlowSystem& primal, const FlowSystem& enriched,
                            const DenseVector& U_low, const std::vector<Goal>& goals,
                            const NewtonConfig& newton) {
  EnrichedPair pair;
  pair.primal = primal.space_ptr();
  pair.enriched = enriched.space_ptr();
  pair.goals = goals;
  const Space& P = *pair.primal;
  const Space& E = *pair.enriched;
  const int boost = enriched.inputs().quadrature_boost;

  pair.U_tilde = embed(P, E, U_low);
  NewtonResult high = newton_solve(enriched, pair.U_tilde, newton);
  pair.U_high = std::move(high.u);
  pair.enriched_report = high.report;

  pair.J_low = evaluate_all(goals, E, pair.U_tilde, boost);
  pair.J_high = evaluate_all(goals, E, pair.U_high, boost);
  pair.combination = combine(pair.J_low, pair.J_high);

  const auto wg = pair.weighted_goals();
  const DenseVector rhs = goal_derivative(LinearizedGoal(wg, E, pair.U_high, boost), E, pair.U_high);
  pair.Z_high = solve_adjoint(enriched, E, pair.U_high, rhs);
  update_low_order(pair, primal, U_low);
  return pair;
}

double iteration_error(const FlowSystem& primal, const DenseVector& U, const DenseVector& Z) {
  return residual_pairing(primal.space(), U, Z, primal.inputs());
}

namespace {

using Real = long double;

/// Q1 partition of unity on the reference cell with physical gradients.
struct PUShapes {
  std::array<Real, 4> phi;
  std::array<std::array<Real, 2>, 4> grad;
};

PUShapes pu_shapes(const Mesh& mesh, int cell, Point xi) {
  const CellMapping m = map_cell(mesh, cell, xi);
  const Real s = xi.x;
  const Real t = xi.y;
  PUShapes out;
  out.phi = {(1 - s) * (1 - t), s * (1 - t), s * t, (1 - s) * t};
  const std::array<std::array<Real, 2>, 4> ref{{{-(1 - t), -(1 - s)}, {1 - t, -s}, {t, s}, {-t, 1 - s}}};
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < 2; ++j) {
      out.grad[k][j] = ref[k][0] * static_cast<Real>(m.inv[0][j]) +
                       ref[k][1] * static_cast<Real>(m.inv[1][j]);
    }
  }
  return out;
}

/// pair(F, scaled(S, phi, grad phi)) = phi * value + grad phi . grad.
struct Localized {
  Real value = 0;
  std::array<Real, 2> grad{};

  Localized& operator+=(const Localized& o) {
    value += o.value;
    grad[0] += o.grad[0];
    grad[1] += o.grad[1];
    return *this;
  }
  Localized scaled(Real s) const { return {s * value, {s * grad[0], s * grad[1]}}; }
  Real at(Real phi, const std::array<Real, 2>& g) const {
    return phi * value + g[0] * grad[0] + g[1] * grad[1];
  }
};

Localized localize(const Sample& F, const Sample& S) {
  const SampleArray a = to_array(F);
  const SampleArray b = to_array(S);
  Localized out;
  for (int k = 0; k < kSampleDim; ++k) out.value += static_cast<Real>(a[k]) * b[k];
  for (int j = 0; j < 2; ++j) {
    out.grad[j] = static_cast<Real>(F.grad_v[0][j]) * S.v[0] +
                  static_cast<Real>(F.grad_v[1][j]) * S.v[1] +
                  static_cast<Real>(F.grad_theta[j]) * S.theta;
  }
  return out;
}

Sample difference(const Sample& a, const Sample& b) { return a - b; }

}  // namespace

EstimatorReport estimate(const EnrichedPair& pair, const ModelInputs& inputs) {
  const Space& E = *pair.enriched;
  const Mesh& mesh = E.mesh();
  const int boost = inputs.quadrature_boost;
  const LinearizedGoal lin(pair.weighted_goals(), E, pair.U_tilde, boost);

  const ScalarDofHandler pu(mesh, 1);
  std::vector<std::vector<std::pair<int, double>>> hanging(pu.n_dofs());
  for (const auto& [dof, c] : pu.hanging()) {
    for (std::size_t k = 0; k < c.masters.size(); ++k) hanging[dof].emplace_back(c.masters[k], c.weights[k]);
  }
  std::vector<Real> node(pu.n_dofs(), 0);
  auto add_to_node = [&](int vertex, Real value) {
    const int d = pu.vertex_dof(vertex);
    if (hanging[d].empty()) {
      node[d] += value;
    } else {
      for (const auto& [m, w] : hanging[d]) node[m] += w * value;
    }
  };

  Real eta_p = 0;
  Real eta_a = 0;
  CellValues cv(E, quadrature_for(E.degrees(), boost));
  for (const int cell : mesh.active_cells()) {
    cv.reinit(cell);
    const auto& verts = mesh.cell(cell).vertices;
    std::array<Real, 4> cell_nodes{};
    for (std::size_t q = 0; q < cv.n_points(); ++q) {
      const Sample u = cv.sample(pair.U_tilde, q);
      const Sample dZ = difference(cv.sample(pair.Z_high, q), cv.sample(pair.Z_tilde, q));
      const Sample dU = difference(cv.sample(pair.U_high, q), u);
      const Sample z = cv.sample(pair.Z_tilde, q);
      const Point x = cv.point(q);
      const Real w = cv.JxW(q);

      const Localized p = localize(residual_flux(inputs, x, u), dZ).scaled(-1);
      Localized a = localize(linearized_flux(inputs, x, u, dU), z).scaled(-1);
      if (lin.has_volume()) a += localize(lin.volume_coefficient(u), dU);

      eta_p += w * p.value;
      eta_a += w * a.value;
      const PUShapes pus = pu_shapes(mesh, cell, cv.reference_point(q));
      for (int k = 0; k < 4; ++k) {
        cell_nodes[k] += w * (p.at(pus.phi[k], pus.grad[k]) + a.at(pus.phi[k], pus.grad[k])) / 2;
      }
    }
    for (int k = 0; k < 4; ++k) add_to_node(verts[k], cell_nodes[k]);
  }

  // Point and boundary terms of J'(U~)(U2 - U~).
  std::map<int, std::vector<const GoalTerm*>> by_cell;
  for (const GoalTerm& t : lin.terms()) by_cell[t.cell].push_back(&t);
  for (const auto& [cell, list] : by_cell) {
    QuadratureRule rule;
    for (const GoalTerm* t : list) {
      rule.points.push_back(t->xi);
      rule.weights.push_back(1.0);
    }
    CellValues tv(E, std::move(rule));
    tv.reinit(cell);
    const auto& verts = mesh.cell(cell).vertices;
    for (std::size_t q = 0; q < list.size(); ++q) {
      const Sample dU = difference(tv.sample(pair.U_high, q), tv.sample(pair.U_tilde, q));
      const Localized a = localize(list[q]->coeff, dU).scaled(list[q]->weight);
      eta_a += a.value;
      const PUShapes pus = pu_shapes(mesh, cell, list[q]->xi);
      for (int k = 0; k < 4; ++k) add_to_node(verts[k], a.at(pus.phi[k], pus.grad[k]) / 2);
    }
  }

  EstimatorReport rep;
  rep.eta_p = static_cast<double>(eta_p);
  rep.eta_a = static_cast<double>(eta_a);
  rep.eta_h = static_cast<double>((eta_p + eta_a) / 2);
  rep.eta_k = residual_pairing(*pair.primal, pair.U_low, pair.Z_low, inputs);

  std::vector<int> vertex_of(pu.n_dofs(), -1);
  for (int v = 0; v < static_cast<int>(mesh.vertices().size()); ++v) {
    if (pu.vertex_dof(v) >= 0) vertex_of[pu.vertex_dof(v)] = v;
  }
  for (int d = 0; d < pu.n_dofs(); ++d) {
    if (!hanging[d].empty()) continue;
    rep.node_vertices.push_back(vertex_of[d]);
    rep.node_indicators.push_back(static_cast<double>(node[d]));
  }
  rep.cells = mesh.active_cells();
  rep.cell_indicators =
      cell_indicators_from_nodes(mesh, rep.cells, rep.node_vertices, rep.node_indicators);
  return rep;
}

std::vector<double> cell_indicators_from_nodes(const Mesh& mesh, const std::vector<int>& cells,
                                               const std::vector<int>& node_vertices,
                                               const std::vector<double>& node_values) {
  if (node_vertices.size() != node_values.size()) {
    throw std::invalid_argument("node vertices and values differ in length");
  }
  const std::vector<int> sharing = mesh.active_cells_per_vertex();
  std::vector<double> value_at(mesh.vertices().size(), 0.0);
  std::vector<bool> is_node(mesh.vertices().size(), false);
  for (std::size_t i = 0; i < node_vertices.size(); ++i) {
    value_at[node_vertices[i]] = node_values[i];
    is_node[node_vertices[i]] = true;
  }
  std::vector<double> out;
  out.reserve(cells.size());
  for (const int c : cells) {
    Real s = 0;
    for (const int v : mesh.cell(c).vertices) {
      if (is_node[v]) s += static_cast<Real>(value_at[v]) / sharing[v];
    }
    out.push_back(static_cast<double>(s));
  }
  return out;
}

Effectivity effectivity(double eta_h, double eta_p, double eta_a, double reference,
                        double approximation) {
  const double err = reference - approximation;
  Effectivity e;
  if (err == 0.0 || !std::isfinite(err)) return e;
  e.total = std::abs(eta_h) / std::abs(err);
  e.primal = std::abs(eta_p) / std::abs(err);
  e.adjoint = std::abs(eta_a) / std::abs(err);
  return e;
}

}  // namespace goalfem
