#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "goalfem/fespace.hpp"
#include "goalfem/linalg.hpp"
#include "goalfem/material.hpp"

namespace goalfem {

enum class ModelKind { Density, Boussinesq, LinearVerification };

/// Sign of the rho' grad(theta).v term in the continuity equation:
/// AsPrinted gives (div(v) rho - rho' grad(theta).v, q), Conservative uses +.
enum class ContinuitySign { AsPrinted, Conservative };

/// Boussinesq buoyancy. Physical: hot fluid rises, residual term
/// +(rho0 g alpha(theta)(theta - theta_ref), psi). AsPrinted flips it.
enum class BuoyancySign { Physical, AsPrinted };

/// Sum of Gaussian beams amplitude * (2 pi sigma^2)^-1 exp(-|x-y|^2 / (2 sigma^2)).
struct LaserSource {
  std::vector<Point> centers;
  std::vector<double> amplitudes;
  double sigma = 1e-2;

  void validate() const;
};

double source_eval(const LaserSource& src, Point x);

struct ModelInputs {
  ModelKind kind = ModelKind::Density;
  MaterialParams params;
  AlphaSpline alpha = AlphaSpline::water();
  LaserSource source;
  /// Replaces the laser source when set.
  std::function<double(Point)> heat_source;
  ContinuitySign continuity_sign = ContinuitySign::Conservative;
  BuoyancySign buoyancy_sign = BuoyancySign::Physical;
  int quadrature_boost = kNonlinearBoost;

  double heat(Point x) const { return heat_source ? heat_source(x) : source_eval(source, x); }
};

/// Pointwise residual integrand: A(U)(Phi) is the integral of
/// pair(residual_flux(x, U(x)), Phi(x)).
Sample residual_flux(const ModelInputs& in, Point x, const Sample& u);
/// Directional derivative of residual_flux at u in direction w.
Sample linearized_flux(const ModelInputs& in, Point x, const Sample& u, const Sample& w);
/// Matrix L with linearized_flux = L * w in the packed layout, row-major.
std::array<double, kSampleDim * kSampleDim> linearized_matrix(const ModelInputs& in, Point x,
                                                              const Sample& u);

/// Condensed residual: entry i is A(U)(Phi_i) for unconstrained i, 0 on
/// constrained rows. Throws NonphysicalTemperatureError if theta <= 0 at a
/// quadrature point (except for the linear verification model).
DenseVector assemble_residual(const Space& space, const DenseVector& U, const ModelInputs& in);

/// Condensed Jacobian on a precomputed pattern (see make_sparsity).
void assemble_jacobian(const Space& space, const DenseVector& U, const ModelInputs& in,
                       SparseMatrix& A);
SparseMatrix assemble_jacobian(const Space& space, const DenseVector& U, const ModelInputs& in);

/// -A(U)(Z) over the unconstrained dofs.
double residual_pairing(const Space& space, const DenseVector& U, const DenseVector& Z,
                        const ModelInputs& in);

}  // namespace goalfem
