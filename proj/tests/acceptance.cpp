// Acceptance run: one PASS/FAIL line per criterion.
//   goalfem_acceptance            all criteria
//   goalfem_acceptance 1 3 9      a subset
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "goalfem/assembly.hpp"
#include "goalfem/io.hpp"
#include "support.hpp"

using namespace goalfem;
using namespace goalfem::testing;

namespace {

constexpr double kFdRelTol = 1e-6;
constexpr double kFdStep = 1e-6;
constexpr double kPuTol = 1e-12;
constexpr double kLinearTol = 1e-10;
constexpr double kEtaK = 1e-10;
constexpr int kMaxReentries = 2;
constexpr int kExample1Dofs = 200000;
constexpr double kSlopeMax = -0.8;
constexpr double kIeffLow = 0.5;
constexpr double kIeffHigh = 1.0;
constexpr int kExample3Levels = 12;
constexpr int kMaxNewtonSteps = 8;
constexpr double kExample2J2 = 302.1829;
constexpr double kExample2RelTol = 1e-2;
constexpr int kExample2Dofs = 200000;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Run {
  Problem problem;
  AdaptResult result;
  double seconds = 0.0;
};

/// Adaptive runs are shared between criteria and cached by name.
class Runs {
 public:
  const Run& get(const std::string& key, const std::function<Problem()>& make, AdaptConfig cfg) {
    auto it = runs_.find(key);
    if (it != runs_.end()) return it->second;
    Run r;
    r.problem = make();
    const auto t0 = std::chrono::steady_clock::now();
    auto log = [&](const LevelRecord& rec, const Space&, const DenseVector&) {
      std::fprintf(stderr, "  [%s] level %2d  dofs %7d  eta_h % .3e  newton %d/%d  %.0fs\n",
                   key.c_str(), rec.level, rec.n_dofs, rec.estimator.eta_h,
                   rec.newton.newton_steps, rec.newton.line_search_steps,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    };
    r.result = adaptive_loop(r.problem, cfg, log);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.result.diverged) std::fprintf(stderr, "  [%s] diverged: %s\n", key.c_str(), r.result.failure.c_str());
    return runs_.emplace(key, std::move(r)).first->second;
  }
  const std::map<std::string, Run>& all() const { return runs_; }

 private:
  std::map<std::string, Run> runs_;
};

/// Levels with a finished estimator.
std::vector<const LevelRecord*> completed(const AdaptResult& r) {
  std::vector<const LevelRecord*> out;
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    if (r.diverged && k + 1 == r.levels.size()) break;
    out.push_back(&r.levels[k]);
  }
  return out;
}

const Run& example1(Runs& runs) {
  AdaptConfig cfg;
  cfg.max_ndofs = kExample1Dofs;
  return runs.get("example1", [] { return make_preset("example1"); }, cfg);
}

const Run& example3(Runs& runs, ModelKind kind) {
  AdaptConfig cfg;
  cfg.max_levels = kExample3Levels;
  const std::string key = kind == ModelKind::Density ? "example3-density" : "example3-boussinesq";
  return runs.get(key, [kind] { return make_preset("example3", kind); }, cfg);
}

const Run& example2(Runs& runs) {
  AdaptConfig cfg;
  cfg.max_ndofs = kExample2Dofs;
  return runs.get("example2", [] { return make_preset("example2", ModelKind::Density, 1e-2); }, cfg);
}

Verdict check_jacobian_fd(Runs&) {
  double worst = 0.0;
  for (ModelKind kind : {ModelKind::Density, ModelKind::Boussinesq}) {
    const Problem p = make_preset("example1", kind);
    auto mesh = std::make_shared<const Mesh>(Mesh::square(p.geometry.origin, p.geometry.size, 3));
    auto s = Space::build(mesh, kPrimalDegrees, p.boundary);
    const DenseVector U = random_state(*s, 7);
    const SparseMatrix J = assemble_jacobian(*s, U, p.inputs);
    for (unsigned k = 0; k < 10; ++k) {
      const DenseVector W = random_direction(*s, 1000 + k);
      DenseVector up = U;
      DenseVector um = U;
      axpy(kFdStep, W, up);
      axpy(-kFdStep, W, um);
      const DenseVector rp = assemble_residual(*s, up, p.inputs);
      const DenseVector rm = assemble_residual(*s, um, p.inputs);
      const DenseVector jw = spmv(J, W);
      double num = 0.0;
      double den = 0.0;
      for (int i = 0; i < s->n_dofs(); ++i) {
        const double fd = (rp[i] - rm[i]) / (2.0 * kFdStep);
        num += (fd - jw[i]) * (fd - jw[i]);
        den += fd * fd;
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
  }
  return {worst <= kFdRelTol, "max relative error " + fmt("%.2e", worst) + " over 20 directions"};
}

Verdict check_linear_exactness(Runs&) {
  ModelInputs in;
  in.kind = ModelKind::LinearVerification;
  in.heat_source = [](Point x) { return 1.0 + x.x * x.y; };
  auto mesh = std::make_shared<const Mesh>(Mesh::square({0, 0}, 0.3, 4));
  auto lo_space = Space::build(mesh, kPrimalDegrees, {});
  auto hi_space = Space::build(mesh, kEnrichedDegrees, {});
  const FlowSystem lo(lo_space, in);
  const FlowSystem hi(hi_space, in);
  const std::vector<Goal> goals{MeanTemperature{}};
  const NewtonResult r = newton_solve(lo, lo_space->initial_state(), NewtonConfig{});
  const EnrichedPair pair = solve_enriched(lo, hi, r.u, goals, NewtonConfig{});
  const EstimatorReport est = estimate(pair, in);
  const double w = pair.combination.weights[0];
  const double gap = std::abs(est.eta_h / w - (pair.J_high[0] - pair.J_low[0]));
  const Effectivity e = effectivity(est.eta_h, est.eta_p, est.eta_a, pair.combination.combine(pair.J_high),
                                    pair.combination.combine(pair.J_low));
  const double ieff_gap = e.primal && e.adjoint ? std::abs(*e.primal - *e.adjoint) : INFINITY;
  const bool ok = gap <= kLinearTol * (1.0 + std::abs(pair.J_low[0])) && ieff_gap <= kLinearTol;
  return {ok, "|eta_h - dJ| = " + fmt("%.2e", gap) + ", |I_eff_p - I_eff_a| = " + fmt("%.2e", ieff_gap)};
}

Verdict check_iteration_error(Runs& runs) {
  const Run& run = example1(runs);
  const auto levels = completed(run.result);
  if (levels.empty()) return {false, "no completed level: " + run.result.failure};
  double worst = 0.0;
  int reentries = 0;
  for (const LevelRecord* rec : levels) {
    worst = std::max(worst, std::abs(rec->estimator.eta_k));
    reentries = std::max(reentries, rec->reentries);
  }
  const bool ok = !run.result.diverged && worst < kEtaK && reentries <= kMaxReentries;
  std::string detail = std::to_string(levels.size()) + " levels, max |eta_k| " + fmt("%.2e", worst) +
                       ", max re-entries " + std::to_string(reentries);
  if (run.result.diverged) detail += ", diverged: " + run.result.failure;
  return {ok, detail};
}

/// The finest completed level supplies J_high as reference; the levels
/// before it are scored.
std::vector<LevelRecord> self_referenced(const AdaptResult& r) {
  const auto levels = completed(r);
  std::vector<LevelRecord> out;
  if (levels.size() < 2) return out;
  const std::vector<double> ref = levels.back()->J_high;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    out.push_back(*levels[k]);
    apply_reference(out.back(), ref);
  }
  return out;
}

Verdict check_convergence_order(Runs& runs) {
  const Run& run = example1(runs);
  const auto scored = self_referenced(run.result);
  if (scored.size() < 5) {
    return {false, std::to_string(scored.size()) + " scored levels, need 5" +
                       (run.result.diverged ? ": " + run.result.failure : "")};
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = scored.size() - 5; k < scored.size(); ++k) {
    const double x = std::log(static_cast<double>(scored[k].n_dofs));
    const double y = std::log(std::abs(scored[k].combined_error.value_or(NAN)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (5 * sxy - sx * sy) / (5 * sxx - sx * sx);
  return {std::isfinite(slope) && slope <= kSlopeMax && !run.result.diverged,
          "slope " + fmt("%.3f", slope) + " up to " + std::to_string(scored.back().n_dofs) + " dofs"};
}

Verdict check_effectivity_band(Runs& runs) {
  const Run& run = example1(runs);
  const auto scored = self_referenced(run.result);
  if (scored.size() < 3) {
    return {false, std::to_string(scored.size()) + " scored levels, need 3" +
                       (run.result.diverged ? ": " + run.result.failure : "")};
  }
  bool ok = !run.result.diverged;
  std::string detail = "I_eff";
  for (std::size_t k = scored.size() - 3; k < scored.size(); ++k) {
    const auto& e = scored[k].eff.total;
    ok = ok && e && *e >= kIeffLow && *e <= kIeffHigh;
    detail += " " + (e ? fmt("%.3f", *e) : std::string("n/a"));
  }
  return {ok, detail};
}

Verdict check_newton_behaviour(Runs& runs) {
  bool ok = true;
  std::string detail;
  for (ModelKind kind : {ModelKind::Density, ModelKind::Boussinesq}) {
    const Run& run = example3(runs, kind);
    const auto levels = completed(run.result);
    int max_steps = 0;
    int backtracks = 0;
    for (const LevelRecord* rec : levels) {
      if (rec->level == 0) continue;
      max_steps = std::max(max_steps, rec->newton.newton_steps);
      backtracks += rec->newton.line_search_steps;
    }
    ok = ok && !run.result.diverged && levels.size() >= 2 && max_steps <= kMaxNewtonSteps && backtracks == 0;
    if (!detail.empty()) detail += "; ";
    detail += std::string(kind == ModelKind::Density ? "density" : "boussinesq") + ": " +
              std::to_string(levels.size()) + " levels, max Newton " + std::to_string(max_steps) +
              ", backtracks " + std::to_string(backtracks) + ", " + fmt("%.0fs", run.seconds);
    if (run.result.diverged) detail += ", diverged: " + run.result.failure;
  }
  return {ok, detail};
}

Verdict check_reference_regression(Runs& runs) {
  const Run& run = example2(runs);
  const auto levels = completed(run.result);
  if (levels.empty()) return {false, "no completed level: " + run.result.failure};
  const LevelRecord* finest = nullptr;
  for (const LevelRecord* rec : levels) {
    if (rec->n_dofs <= kExample2Dofs) finest = rec;
  }
  if (!finest) return {false, "no level within the dof budget"};
  const LevelRecord& last = *finest;
  const double rel = std::abs(last.J[1] - kExample2J2) / kExample2J2;
  return {rel <= kExample2RelTol,
          "J_2 = " + fmt("%.4f", last.J[1]) + " at " + std::to_string(last.n_dofs) + " dofs, rel " +
              fmt("%.2e", rel)};
}

Verdict check_material_laws(Runs&) {
  const MaterialParams params;
  const AlphaSpline water = AlphaSpline::water();
  const bool rho_exact = material_eval(params, water, 293.15).rho == 998.21;
  bool monotone = true;
  double prev_rho = INFINITY;
  double prev_nu = INFINITY;
  for (int t = 0; t <= 380 - 277; ++t) {
    const MaterialState m = material_eval(params, water, 277.15 + t);
    monotone = monotone && m.rho < prev_rho && m.nu < prev_nu && m.nu > params.nu0;
    prev_rho = m.rho;
    prev_nu = m.nu;
  }
  const double celsius[] = {0, 4, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 60, 70, 80, 90, 99.63};
  const double alpha[] = {-0.08e-3, 0.0,      0.011e-3, 0.087e-3, 0.152e-3, 0.209e-3,
                          0.259e-3, 0.305e-3, 0.347e-3, 0.386e-3, 0.423e-3, 0.457e-3,
                          0.522e-3, 0.583e-3, 0.64e-3,  0.696e-3, 0.748e-3};
  bool knots = water.knots().size() == 17;
  for (std::size_t i = 0; knots && i < 17; ++i) {
    knots = water.knots()[i] == celsius[i] + 273.15 && water.values()[i] == alpha[i];
  }
  return {rho_exact && monotone && knots,
          std::string("rho(293.15) exact ") + (rho_exact ? "yes" : "no") + ", monotone " +
              (monotone ? "yes" : "no") + ", alpha knots verbatim " + (knots ? "yes" : "no")};
}

Verdict check_partition_of_unity(Runs& runs) {
  if (runs.all().empty()) {
    example3(runs, ModelKind::Boussinesq);
  }
  double worst = 0.0;
  int n = 0;
  for (const auto& [key, run] : runs.all()) {
    for (const LevelRecord* rec : completed(run.result)) {
      double s = 0.0;
      for (double x : rec->estimator.node_indicators) s += x;
      const double eta = rec->estimator.eta_h;
      worst = std::max(worst, std::abs(s - eta) / (1.0 + std::abs(eta)));
      ++n;
    }
  }
  return {n > 0 && worst <= kPuTol,
          std::to_string(n) + " levels over " + std::to_string(runs.all().size()) +
              " runs, max |sum - eta_h|/(1+|eta_h|) " + fmt("%.2e", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  app.add_option("criteria", only, "criteria to run (1-9), default all")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict(Runs&)>>> criteria{
      {"Jacobian vs finite differences", check_jacobian_fd},
      {"partition-of-unity identity", check_partition_of_unity},
      {"linear exactness", check_linear_exactness},
      {"iteration error, Example 1", check_iteration_error},
      {"convergence order, Example 1", check_convergence_order},
      {"effectivity band, Example 1", check_effectivity_band},
      {"Newton and line search, Example 3", check_newton_behaviour},
      {"reference value, Example 2", check_reference_regression},
      {"material laws", check_material_laws},
  };
  std::set<int> selected(only.begin(), only.end());
  if (selected.empty()) {
    for (int i = 1; i <= 9; ++i) selected.insert(i);
  }
  // The identity is checked over every run the other criteria made.
  std::vector<int> order;
  for (int i : selected) {
    if (i != 2) order.push_back(i);
  }
  if (selected.count(2)) order.push_back(2);

  Runs runs;
  std::map<int, Verdict> verdicts;
  for (int i : order) {
    try {
      verdicts[i] = criteria[i - 1].second(runs);
    } catch (const std::exception& e) {
      verdicts[i] = {false, std::string("exception: ") + e.what()};
    }
  }
  bool all = true;
  for (const auto& [i, v] : verdicts) {
    std::printf("criterion %d %s: %s (%s)\n", i, criteria[i - 1].first.c_str(), v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    all = all && v.pass;
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
