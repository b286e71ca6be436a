#pragma once

#include <vector>

#include "goalfem/mesh.hpp"

namespace goalfem {

/// Tensor Gauss rule on the unit reference square [0,1]^2; weights sum to 1.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre points and weights on [0,1].
struct GaussRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

GaussRule1D gauss_legendre(int n);
QuadratureRule gauss_square(int n_per_axis);

/// Lagrange polynomials of degree k on the equispaced nodes j/k of [0,1].
class LagrangeBasis1D {
 public:
  explicit LagrangeBasis1D(int degree);

  int degree() const { return degree_; }
  double node(int j) const { return static_cast<double>(j) / degree_; }
  double value(int j, double t) const;
  double derivative(int j, double t) const;

 private:
  int degree_;
};

}  // namespace goalfem
