#include "goalfem/model.hpp"

#include <cmath>

#include "goalfem/assembly.hpp"

namespace goalfem {

void LaserSource::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("laser spread sigma must be positive");
  if (centers.size() != amplitudes.size()) {
    throw std::invalid_argument("laser centers and amplitudes differ in length");
  }
}

double source_eval(const LaserSource& src, Point x) {
  const double s2 = src.sigma * src.sigma;
  const double peak = 1.0 / (2.0 * M_PI * s2);
  double f = 0.0;
  for (std::size_t i = 0; i < src.centers.size(); ++i) {
    const Point d = x - src.centers[i];
    f += src.amplitudes[i] * peak * std::exp(-(d.x * d.x + d.y * d.y) / (2.0 * s2));
  }
  return f;
}

namespace {

/// Coefficients entering the flux, frozen at one temperature.
struct Coefficients {
  double mu = 0.0, dmu = 0.0;        // viscosity nu*rho and its theta derivative
  double rho_c = 0.0, drho_c = 0.0;  // density in convection and gravity
  double rho_div = 0.0, drho_div = 0.0, d2rho_div = 0.0;  // continuity
  double buoy = 0.0, dbuoy = 0.0;    // Boussinesq: alpha(theta)(theta - theta_ref)
  bool gravity = true;
  bool convection = true;
};

Coefficients coefficients(const ModelInputs& in, double theta) {
  Coefficients c;
  const MaterialParams& p = in.params;
  switch (in.kind) {
    case ModelKind::LinearVerification:
      c.mu = p.nu0 * p.rho0;
      c.rho_div = 1.0;
      c.gravity = false;
      c.convection = false;
      return c;
    case ModelKind::Boussinesq: {
      const MaterialState m = material_eval(p, in.alpha, theta);
      c.mu = m.nu * p.rho0;
      c.dmu = m.dnu * p.rho0;
      c.rho_c = p.rho0;
      c.rho_div = p.rho0;
      c.buoy = m.alpha * (theta - p.theta_ref);
      c.dbuoy = m.alpha_slope * (theta - p.theta_ref) + m.alpha;
      return c;
    }
    case ModelKind::Density: {
      const MaterialState m = material_eval(p, in.alpha, theta);
      c.mu = m.nu * m.rho;
      c.dmu = m.dnu * m.rho + m.nu * m.drho;
      c.rho_c = m.rho;
      c.drho_c = m.drho;
      c.rho_div = m.rho;
      c.drho_div = m.drho;
      c.d2rho_div = m.d2rho;
      return c;
    }
  }
  return c;
}

double continuity_sign(const ModelInputs& in) {
  return in.continuity_sign == ContinuitySign::AsPrinted ? 1.0 : -1.0;
}

double buoyancy_sign(const ModelInputs& in) {
  return in.buoyancy_sign == BuoyancySign::Physical ? 1.0 : -1.0;
}

Sample flux(const ModelInputs& in, const Coefficients& c, Point x, const Sample& u) {
  Sample f;
  const auto& g = u.grad_v;
  const auto& grav = in.params.gravity;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) f.grad_v[i][j] = c.mu * (g[i][j] + g[j][i]);
    f.grad_v[i][i] += u.p;
    if (c.convection) f.v[i] += c.rho_c * (g[i][0] * u.v[0] + g[i][1] * u.v[1]);
    if (c.gravity) {
      if (in.kind == ModelKind::Boussinesq) {
        f.v[i] += buoyancy_sign(in) * in.params.rho0 * grav[i] * c.buoy;
      } else {
        f.v[i] -= c.rho_c * grav[i];
      }
    }
  }
  const double div = g[0][0] + g[1][1];
  const double gt_v = u.grad_theta[0] * u.v[0] + u.grad_theta[1] * u.v[1];
  f.p = div * c.rho_div - continuity_sign(in) * c.drho_div * gt_v;
  f.grad_theta = {in.params.k_thermal * u.grad_theta[0], in.params.k_thermal * u.grad_theta[1]};
  f.theta = (c.convection ? gt_v : 0.0) - in.heat(x);
  return f;
}

Sample flux_derivative(const ModelInputs& in, const Coefficients& c, const Sample& u,
                       const Sample& w) {
  Sample f;
  const auto& g = u.grad_v;
  const auto& dg = w.grad_v;
  const double dt = w.theta;
  const auto& grav = in.params.gravity;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      f.grad_v[i][j] = c.mu * (dg[i][j] + dg[j][i]) + c.dmu * dt * (g[i][j] + g[j][i]);
    }
    f.grad_v[i][i] += w.p;
    if (c.convection) {
      const double conv = g[i][0] * u.v[0] + g[i][1] * u.v[1];
      const double dconv = dg[i][0] * u.v[0] + dg[i][1] * u.v[1] + g[i][0] * w.v[0] +
                           g[i][1] * w.v[1];
      f.v[i] += c.rho_c * dconv + c.drho_c * dt * conv;
    }
    if (c.gravity) {
      if (in.kind == ModelKind::Boussinesq) {
        f.v[i] += buoyancy_sign(in) * in.params.rho0 * grav[i] * c.dbuoy * dt;
      } else {
        f.v[i] -= c.drho_c * dt * grav[i];
      }
    }
  }
  const double div = g[0][0] + g[1][1];
  const double ddiv = dg[0][0] + dg[1][1];
  const double gt_v = u.grad_theta[0] * u.v[0] + u.grad_theta[1] * u.v[1];
  const double dgt_v = w.grad_theta[0] * u.v[0] + w.grad_theta[1] * u.v[1] +
                       u.grad_theta[0] * w.v[0] + u.grad_theta[1] * w.v[1];
  f.p = ddiv * c.rho_div + div * c.drho_div * dt -
        continuity_sign(in) * (c.d2rho_div * dt * gt_v + c.drho_div * dgt_v);
  f.grad_theta = {in.params.k_thermal * w.grad_theta[0], in.params.k_thermal * w.grad_theta[1]};
  f.theta = c.convection ? dgt_v : 0.0;
  return f;
}

using LMatrix = std::array<double, kSampleDim * kSampleDim>;

LMatrix flux_matrix(const ModelInputs& in, const Coefficients& c, const Sample& u) {
  LMatrix L{};
  for (int b = 0; b < kSampleDim; ++b) {
    SampleArray e{};
    e[b] = 1.0;
    const SampleArray col = to_array(flux_derivative(in, c, u, from_array(e)));
    for (int a = 0; a < kSampleDim; ++a) L[a * kSampleDim + b] = col[a];
  }
  return L;
}

/// Shape data of local dof i in packed slots: value and physical gradient.
struct LocalBasis {
  int n_slots;
  std::array<int, 3> slot;
  std::array<double, 3> val;
};

void fill_basis(const Space& space, const CellValues& cv, std::size_t q,
                std::vector<LocalBasis>& basis) {
  const int n = cv.n_local();
  basis.resize(n);
  for (int i = 0; i < n; ++i) {
    const int comp = space.local_component(i);
    const auto slots = sample_slots(comp);
    LocalBasis& b = basis[i];
    b.n_slots = static_cast<int>(slots.size());
    const double phi = cv.shape(i, q);
    b.slot[0] = slots[0];
    b.val[0] = phi;
    if (b.n_slots == 3) {
      const auto g = cv.grad(i, q);
      b.slot[1] = slots[1];
      b.slot[2] = slots[2];
      b.val[1] = g[0];
      b.val[2] = g[1];
    }
  }
}

}  // namespace

Sample residual_flux(const ModelInputs& in, Point x, const Sample& u) {
  return flux(in, coefficients(in, u.theta), x, u);
}

Sample linearized_flux(const ModelInputs& in, Point /*x*/, const Sample& u, const Sample& w) {
  return flux_derivative(in, coefficients(in, u.theta), u, w);
}

std::array<double, kSampleDim * kSampleDim> linearized_matrix(const ModelInputs& in, Point /*x*/,
                                                              const Sample& u) {
  return flux_matrix(in, coefficients(in, u.theta), u);
}

DenseVector assemble_residual(const Space& space, const DenseVector& U, const ModelInputs& in) {
  if (U.size() != static_cast<std::size_t>(space.n_dofs())) {
    throw std::invalid_argument("assemble_residual: state size does not match the space");
  }
  DenseVector R(space.n_dofs(), 0.0);
  CellValues cv(space, quadrature_for(space.degrees(), in.quadrature_boost));
  LocalCondenser condenser(space);
  std::vector<double> local;
  std::vector<LocalBasis> basis;
  for (const int cell : space.mesh().active_cells()) {
    cv.reinit(cell);
    const int n = cv.n_local();
    local.assign(n, 0.0);
    for (std::size_t q = 0; q < cv.n_points(); ++q) {
      const Sample u = cv.sample(U, q);
      const SampleArray F = to_array(residual_flux(in, cv.point(q), u));
      const double w = cv.JxW(q);
      fill_basis(space, cv, q, basis);
      for (int i = 0; i < n; ++i) {
        const LocalBasis& b = basis[i];
        double s = 0.0;
        for (int a = 0; a < b.n_slots; ++a) s += b.val[a] * F[b.slot[a]];
        local[i] += w * s;
      }
    }
    condenser.reinit(cv.dofs());
    condenser.scatter_vector(local, R);
  }
  return R;
}

void assemble_jacobian(const Space& space, const DenseVector& U, const ModelInputs& in,
                       SparseMatrix& A) {
  if (U.size() != static_cast<std::size_t>(space.n_dofs()) || A.n_rows() != space.n_dofs()) {
    throw std::invalid_argument("assemble_jacobian: size mismatch with the space");
  }
  A.set_zero();
  CellValues cv(space, quadrature_for(space.degrees(), in.quadrature_boost));
  LocalCondenser condenser(space);
  std::vector<double> local;
  std::vector<LocalBasis> basis;
  std::vector<SampleArray> LB;
  for (const int cell : space.mesh().active_cells()) {
    cv.reinit(cell);
    const int n = cv.n_local();
    local.assign(static_cast<std::size_t>(n) * n, 0.0);
    LB.resize(n);
    for (std::size_t q = 0; q < cv.n_points(); ++q) {
      const Sample u = cv.sample(U, q);
      const LMatrix L = flux_matrix(in, coefficients(in, u.theta), u);
      const double w = cv.JxW(q);
      fill_basis(space, cv, q, basis);
      for (int j = 0; j < n; ++j) {
        const LocalBasis& b = basis[j];
        for (int a = 0; a < kSampleDim; ++a) {
          double s = 0.0;
          for (int k = 0; k < b.n_slots; ++k) s += L[a * kSampleDim + b.slot[k]] * b.val[k];
          LB[j][a] = w * s;
        }
      }
      for (int i = 0; i < n; ++i) {
        const LocalBasis& b = basis[i];
        double* row = &local[static_cast<std::size_t>(i) * n];
        if (b.n_slots == 1) {
          const int s0 = b.slot[0];
          const double v0 = b.val[0];
          for (int j = 0; j < n; ++j) row[j] += v0 * LB[j][s0];
        } else {
          const int s0 = b.slot[0], s1 = b.slot[1], s2 = b.slot[2];
          const double v0 = b.val[0], v1 = b.val[1], v2 = b.val[2];
          for (int j = 0; j < n; ++j) row[j] += v0 * LB[j][s0] + v1 * LB[j][s1] + v2 * LB[j][s2];
        }
      }
    }
    condenser.reinit(cv.dofs());
    condenser.scatter_matrix(local, A);
  }
  set_constrained_diagonal(space, A);
}

SparseMatrix assemble_jacobian(const Space& space, const DenseVector& U, const ModelInputs& in) {
  SparseMatrix A(make_sparsity(space));
  assemble_jacobian(space, U, in, A);
  return A;
}

double residual_pairing(const Space& space, const DenseVector& U, const DenseVector& Z,
                        const ModelInputs& in) {
  if (Z.size() != U.size()) throw std::invalid_argument("residual_pairing: size mismatch");
  return -dot(assemble_residual(space, U, in), Z);
}

}  // namespace goalfem
