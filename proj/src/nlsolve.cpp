#include "goalfem/nlsolve.hpp"

#include <cmath>
#include <sstream>

#include "goalfem/assembly.hpp"

namespace goalfem {

FlowSystem::FlowSystem(std::shared_ptr<const Space> space, const ModelInputs& inputs)
    : space_(std::move(space)), inputs_(inputs) {
  inputs_.params.validate();
  if (!inputs_.heat_source) inputs_.source.validate();
  pattern_ = std::make_shared<const SparseMatrix>(make_sparsity(*space_));
}

DenseVector FlowSystem::residual(const DenseVector& u) const {
  return assemble_residual(*space_, u, inputs_);
}

SparseMatrix FlowSystem::jacobian(const DenseVector& u) const {
  SparseMatrix A = *pattern_;
  assemble_jacobian(*space_, u, inputs_, A);
  return A;
}

void FlowSystem::finalize_update(DenseVector& p) const {
  space_->constraints().distribute(p, true);
}

void NewtonConfig::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("line search beta must lie in (0,1)");
  if (max_line_search < 0 || max_newton < 1) {
    throw std::invalid_argument("Newton iteration limits must be positive");
  }
}

namespace {

bool finite(const DenseVector& v) {
  for (const double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

LineSearchResult line_search(const NonlinearSystem& system, const DenseVector& u,
                             const DenseVector& p, double residual_norm, double beta,
                             int max_iter) {
  LineSearchResult out;
  double alpha = 1.0;
  for (int k = 0; k <= max_iter; ++k) {
    DenseVector trial = u;
    axpy(alpha, p, trial);
    out.backtracks = k;
    try {
      DenseVector r = system.residual(trial);
      const double norm = norm2(r);
      if (std::isfinite(norm) && norm < residual_norm) {
        out.u = std::move(trial);
        out.residual = std::move(r);
        out.residual_norm = norm;
        out.decreased = true;
        return out;
      }
      if (k == max_iter) {
        out.u = std::move(trial);
        out.residual = std::move(r);
        out.residual_norm = norm;
      }
    } catch (const NonphysicalTemperatureError&) {
      if (k == max_iter) {
        out.u = std::move(trial);
        out.residual_norm = std::numeric_limits<double>::infinity();
      }
    }
    if (k < max_iter) alpha *= beta;
  }
  return out;
}

NewtonResult newton_solve(const NonlinearSystem& system, const DenseVector& u0,
                          const NewtonConfig& config) {
  config.validate();
  NewtonResult result;
  NewtonReport& rep = result.report;
  DenseVector u = u0;
  DenseVector r = system.residual(u);
  double norm = norm2(r);
  rep.initial_residual = norm;
  rep.tolerance = config.tolerance ? *config.tolerance
                                   : std::max(config.res_abs, config.res_rel * norm);
  rep.history.push_back(norm);
  while (!(norm < rep.tolerance)) {
    if (rep.newton_steps >= config.max_newton || !std::isfinite(norm)) {
      std::ostringstream os;
      os << "Newton did not converge in " << rep.newton_steps << " steps (residual " << norm
         << ", tolerance " << rep.tolerance << ")";
      throw DivergenceError(os.str(), rep.history);
    }
    const SparseMatrix J = system.jacobian(u);
    DenseVector rhs = r;
    for (double& x : rhs) x = -x;
    DenseVector p = LUFactorization(J).solve(rhs);
    system.finalize_update(p);
    if (!finite(p)) throw DivergenceError("Newton update is not finite", rep.history);
    LineSearchResult ls =
        line_search(system, u, p, norm, config.beta, config.max_line_search);
    ++rep.newton_steps;
    rep.line_search_steps += ls.backtracks;
    if (!ls.decreased) rep.stalled = true;
    u = std::move(ls.u);
    if (ls.residual.empty()) {
      throw DivergenceError("line search ended in a nonphysical state", rep.history);
    }
    r = std::move(ls.residual);
    norm = ls.residual_norm;
    rep.history.push_back(norm);
  }
  rep.final_residual = norm;
  rep.converged = true;
  result.u = std::move(u);
  return result;
}

}  // namespace goalfem
