#pragma once

#include <memory>
#include <random>

#include "goalfem/fespace.hpp"
#include "goalfem/model.hpp"

namespace goalfem::testing {

inline std::shared_ptr<const Space> square_space(int n, DegreeTriple degrees = kPrimalDegrees,
                                                 double side = 0.3, BoundarySpec bc = {}) {
  auto mesh = std::make_shared<const Mesh>(Mesh::square({0.0, 0.0}, side, n));
  return Space::build(mesh, degrees, bc);
}

inline int component_of(const Space& space, int dof) {
  for (int c = kComponents - 1; c >= 0; --c) {
    if (dof >= space.component_offset(c)) return c;
  }
  return 0;
}

/// Per-component amplitudes: velocity, velocity, pressure, temperature.
struct Scales {
  double v = 1e-3;
  double p = 1.0;
  double theta = 5.0;
};

inline double scale_of(const Space& space, int dof, const Scales& s) {
  const int c = component_of(space, dof);
  return c == Temperature ? s.theta : c == Pressure ? s.p : s.v;
}

/// Perturbation of the Dirichlet lift, consistent with the constraints.
inline DenseVector random_state(const Space& space, unsigned seed, Scales s = {}) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseVector x = space.initial_state();
  for (int i = 0; i < space.n_dofs(); ++i) x[i] += scale_of(space, i, s) * u(gen);
  space.constraints().distribute(x, false);
  return x;
}

/// Direction satisfying the homogeneous constraints.
inline DenseVector random_direction(const Space& space, unsigned seed, Scales s = {}) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseVector w(space.n_dofs());
  for (int i = 0; i < space.n_dofs(); ++i) w[i] = scale_of(space, i, s) * u(gen);
  space.constraints().distribute(w, true);
  return w;
}

/// Two lasers inside (0, 0.3)^2 with Example-1 amplitudes scaled down.
inline ModelInputs small_inputs(ModelKind kind, double amplitude = 50.0) {
  ModelInputs in;
  in.kind = kind;
  in.source.centers = {{0.05, 0.05}, {0.25, 0.05}};
  in.source.amplitudes = {amplitude, amplitude};
  in.source.sigma = 0.05;
  return in;
}

}  // namespace goalfem::testing
