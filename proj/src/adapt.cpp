#include "goalfem/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace goalfem {

void AdaptConfig::validate() const {
  if (!(mark_fraction > 0.0 && mark_fraction <= 1.0)) {
    throw std::invalid_argument("mark fraction must lie in (0, 1]");
  }
  if (max_ndofs < 1 || max_levels < 1) throw std::invalid_argument("dof and level budgets must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("TOL must be positive");
  newton.validate();
}

std::vector<int> mark_top_fraction(const std::vector<int>& cells,
                                   const std::vector<double>& indicators, double fraction) {
  if (cells.size() != indicators.size()) {
    throw std::invalid_argument("marking: cells and indicators differ in length");
  }
  if (cells.empty()) throw std::invalid_argument("marking needs at least one cell");
  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ia = std::abs(indicators[a]);
    const double ib = std::abs(indicators[b]);
    if (ia != ib) return ia > ib;
    return cells[a] < cells[b];
  });
  const auto n = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(cells.size()) - 1e-12));
  std::vector<int> marked;
  for (std::size_t k = 0; k < std::min(n, cells.size()); ++k) marked.push_back(cells[order[k]]);
  std::sort(marked.begin(), marked.end());
  return marked;
}

void apply_reference(LevelRecord& rec, const std::vector<double>& reference) {
  if (reference.size() != rec.J.size()) {
    throw std::invalid_argument("reference values do not match the goal count");
  }
  rec.abs_error.clear();
  rec.rel_error.clear();
  long double combined = 0.0L;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double err = reference[i] - rec.J[i];
    rec.abs_error.push_back(std::abs(err));
    rec.rel_error.push_back(reference[i] != 0.0 ? std::abs(err / reference[i]) : std::abs(err));
    combined += rec.combination.weights[i] * err;
  }
  rec.combined_error = static_cast<double>(combined);
  // Effectivity of the combined functional: err = J_c(ref) - J_c(U_h).
  rec.eff = effectivity(rec.estimator.eta_h, rec.estimator.eta_p, rec.estimator.eta_a,
                        static_cast<double>(combined), 0.0);
}

RampResult ramped_newton(std::shared_ptr<const Space> space, const ModelInputs& inputs,
                         const DenseVector& u0, const NewtonConfig& config) {
  if (inputs.heat_source) throw std::invalid_argument("source ramp needs a laser source");
  const FlowSystem full(space, inputs);
  NewtonConfig final_config = config;
  if (!final_config.tolerance) {
    final_config.tolerance =
        std::max(config.res_abs, config.res_rel * norm2(full.residual(u0)));
  }
  RampResult out;
  NewtonReport total;
  DenseVector u = u0;
  double s = 0.0;
  double ds = 0.1;
  while (true) {
    const double next = std::min(1.0, s + ds);
    ModelInputs scaled = inputs;
    for (double& a : scaled.source.amplitudes) a *= next;
    try {
      NewtonResult stage = next < 1.0 ? newton_solve(FlowSystem(space, scaled), u, config)
                                      : newton_solve(full, u, final_config);
      total.newton_steps += stage.report.newton_steps;
      total.line_search_steps += stage.report.line_search_steps;
      total.stalled = total.stalled || stage.report.stalled;
      ++out.stages;
      u = std::move(stage.u);
      s = next;
      if (s >= 1.0) {
        total.initial_residual = stage.report.initial_residual;
        total.final_residual = stage.report.final_residual;
        total.tolerance = stage.report.tolerance;
        total.converged = true;
        total.history = stage.report.history;
        break;
      }
      ds *= 1.5;
    } catch (const DivergenceError&) {
      ds /= 3.0;
      if (ds < 1e-4) {
        std::ostringstream os;
        os << "source ramp stalled at " << s << " of the laser power";
        throw DivergenceError(os.str(), total.history);
      }
    }
  }
  out.result.u = std::move(u);
  out.result.report = total;
  return out;
}

AdaptResult adaptive_loop(const Problem& problem, const AdaptConfig& config,
                          const LevelCallback& on_level) {
  config.validate();
  AdaptResult result;
  result.reference = problem.reference;
  result.reference_source = problem.reference_source;

  auto mesh = std::make_shared<const Mesh>(problem.initial_mesh());
  std::shared_ptr<const Space> previous;
  DenseVector U_prev;
  for (int level = 0; level < config.max_levels; ++level) {
    auto primal = Space::build(mesh, kPrimalDegrees, problem.boundary);
    auto enriched = Space::build(mesh, kEnrichedDegrees, problem.boundary);
    const FlowSystem primal_sys(primal, problem.inputs);
    const FlowSystem enriched_sys(enriched, problem.inputs);

    LevelRecord rec;
    rec.level = level;
    rec.n_dofs = primal->n_dofs();
    rec.n_enriched_dofs = enriched->n_dofs();
    rec.n_cells = mesh->n_active();
    try {
      const DenseVector U0 = previous ? transfer(*previous, *primal, U_prev) : primal->initial_state();
      NewtonResult low;
      try {
        low = newton_solve(primal_sys, U0, config.newton);
      } catch (const DivergenceError&) {
        if (previous || !config.source_ramp || problem.inputs.heat_source) throw;
        RampResult ramp = ramped_newton(primal, problem.inputs, U0, config.newton);
        low = std::move(ramp.result);
        rec.ramp_stages = ramp.stages;
      }
      rec.newton = low.report;

      EnrichedPair pair = solve_enriched(primal_sys, enriched_sys, low.u, problem.goals, config.newton);
      rec.enriched_newton = pair.enriched_report;

      double eta_k = iteration_error(primal_sys, pair.U_low, pair.Z_low);
      double tolerance = low.report.tolerance;
      while (std::abs(eta_k) >= config.eta_k_threshold && rec.reentries < config.max_reentries) {
        NewtonConfig tighter = config.newton;
        tolerance *= 1e-2;
        tighter.tolerance = tolerance;
        NewtonResult again = newton_solve(primal_sys, pair.U_low, tighter);
        rec.newton.newton_steps += again.report.newton_steps;
        rec.newton.line_search_steps += again.report.line_search_steps;
        rec.newton.final_residual = again.report.final_residual;
        rec.newton.tolerance = again.report.tolerance;
        rec.newton.stalled = rec.newton.stalled || again.report.stalled;
        update_low_order(pair, primal_sys, again.u);
        eta_k = iteration_error(primal_sys, pair.U_low, pair.Z_low);
        ++rec.reentries;
      }

      rec.estimator = estimate(pair, problem.inputs);
      rec.J = pair.J_low;
      rec.J_high = pair.J_high;
      rec.combination = pair.combination;
      if (problem.reference) apply_reference(rec, *problem.reference);

      if (on_level) on_level(rec, *primal, pair.U_low);
      U_prev = pair.U_low;
    } catch (const std::exception& e) {
      result.diverged = true;
      result.failure = "level " + std::to_string(level) + ": " + e.what();
      result.levels.push_back(std::move(rec));
      return result;
    }
    previous = primal;
    result.levels.push_back(rec);

    if (std::abs(rec.estimator.eta_h) <= 1e-2 * config.tol) break;
    if (rec.n_dofs >= config.max_ndofs) break;
    if (level + 1 >= config.max_levels) break;
    const auto marked = mark_top_fraction(rec.estimator.cells, rec.estimator.cell_indicators,
                                          config.mark_fraction);
    mesh = std::make_shared<const Mesh>(mesh->refine(marked));
  }
  return result;
}

}  // namespace goalfem
