#include "goalfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace goalfem {

namespace {

/// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  if (n == 1) return {x, 1.0};
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussRule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  GaussRule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 1.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

QuadratureRule gauss_square(int n_per_axis) {
  const GaussRule1D g = gauss_legendre(n_per_axis);
  QuadratureRule rule;
  for (int j = 0; j < n_per_axis; ++j) {
    for (int i = 0; i < n_per_axis; ++i) {
      rule.points.push_back({g.points[i], g.points[j]});
      rule.weights.push_back(g.weights[i] * g.weights[j]);
    }
  }
  return rule;
}

LagrangeBasis1D::LagrangeBasis1D(int degree) : degree_(degree) {
  if (degree < 1) throw std::invalid_argument("Lagrange basis degree must be >= 1");
}

double LagrangeBasis1D::value(int j, double t) const {
  double v = 1.0;
  const double tj = node(j);
  for (int m = 0; m <= degree_; ++m) {
    if (m == j) continue;
    v *= (t - node(m)) / (tj - node(m));
  }
  return v;
}

double LagrangeBasis1D::derivative(int j, double t) const {
  const double tj = node(j);
  double sum = 0.0;
  for (int l = 0; l <= degree_; ++l) {
    if (l == j) continue;
    double term = 1.0 / (tj - node(l));
    for (int m = 0; m <= degree_; ++m) {
      if (m == j || m == l) continue;
      term *= (t - node(m)) / (tj - node(m));
    }
    sum += term;
  }
  return sum;
}

}  // namespace goalfem
