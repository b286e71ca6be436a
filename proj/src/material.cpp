#include "goalfem/material.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace goalfem {

NonphysicalTemperatureError::NonphysicalTemperatureError(double theta)
    : std::runtime_error("nonphysical temperature " + std::to_string(theta) + " K"),
      theta_(theta) {}

void MaterialParams::validate() const {
  if (!(rho0 > 0.0) || !(nu0 > 0.0) || !(k_thermal > 0.0) || !(theta_ref > 0.0) || !(R > 0.0)) {
    throw std::invalid_argument("material parameters rho0, nu0, k, R, theta_ref must be positive");
  }
}

AlphaSpline::AlphaSpline(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() < 2 || knots_.size() != values_.size()) {
    throw std::invalid_argument("alpha spline needs at least two knots and matching values");
  }
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    if (!(knots_[i] < knots_[i + 1])) {
      throw std::invalid_argument("alpha spline knots must be strictly increasing");
    }
    slopes_.push_back((values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]));
  }
  cumulative_.assign(knots_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    cumulative_[i + 1] =
        cumulative_[i] + 0.5 * (values_[i] + values_[i + 1]) * (knots_[i + 1] - knots_[i]);
  }
}

AlphaSpline AlphaSpline::water() {
  const std::vector<double> celsius{0,  4,  5,  10, 15, 20, 25, 30,   35,
                                    40, 45, 50, 60, 70, 80, 90, 99.63};
  std::vector<double> values{-0.08e-3, 0.0,      0.011e-3, 0.087e-3, 0.152e-3, 0.209e-3,
                             0.259e-3, 0.305e-3, 0.347e-3, 0.386e-3, 0.423e-3, 0.457e-3,
                             0.522e-3, 0.583e-3, 0.64e-3,  0.696e-3, 0.748e-3};
  std::vector<double> kelvin;
  for (const double c : celsius) kelvin.push_back(c + 273.15);
  return AlphaSpline(std::move(kelvin), std::move(values));
}

int AlphaSpline::segment(double theta) const {
  const auto below = std::lower_bound(knots_.begin(), knots_.end(), theta) - knots_.begin();
  return std::clamp(static_cast<int>(below) - 1, 0, static_cast<int>(knots_.size()) - 2);
}

double AlphaSpline::value(double theta) const {
  const int i = segment(theta);
  return values_[i] + slopes_[i] * (theta - knots_[i]);
}

double AlphaSpline::slope(double theta) const { return slopes_[segment(theta)]; }

double AlphaSpline::antiderivative(double theta) const {
  const int i = segment(theta);
  const double d = theta - knots_[i];
  return cumulative_[i] + values_[i] * d + 0.5 * slopes_[i] * d * d;
}

double AlphaSpline::integral(double a, double b) const {
  if (a == b) return 0.0;
  return antiderivative(b) - antiderivative(a);
}

MaterialState material_eval(const MaterialParams& params, const AlphaSpline& spline, double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw NonphysicalTemperatureError(theta);
  MaterialState m;
  m.alpha = spline.value(theta);
  m.alpha_slope = spline.slope(theta);
  m.int_alpha = spline.integral(params.theta_ref, theta);
  m.rho = params.rho0 * std::exp(-m.int_alpha);
  m.drho = -m.alpha * m.rho;
  m.d2rho = (m.alpha * m.alpha - m.alpha_slope) * m.rho;
  const double arrhenius = params.E_A / (params.R * theta);
  m.nu = params.nu0 * std::exp(arrhenius);
  m.dnu = -arrhenius / theta * m.nu;
  return m;
}

}  // namespace goalfem
