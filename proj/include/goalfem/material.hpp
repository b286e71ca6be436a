#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace goalfem {

class NonphysicalTemperatureError : public std::runtime_error {
 public:
  explicit NonphysicalTemperatureError(double theta);
  double theta() const { return theta_; }

 private:
  double theta_;
};

struct MaterialParams {
  double rho0 = 998.21;
  double nu0 = 2.216065960663198e-6;
  double E_A = 14906.585117275014;
  double R = 8.31446261815324;
  double k_thermal = 0.5918;
  double theta_ref = 293.15;
  std::array<double, 2> gravity{0.0, -9.81};

  void validate() const;
};

/// Piecewise linear thermal expansion coefficient with linear extrapolation
/// by the end slopes. Knots in Kelvin.
class AlphaSpline {
 public:
  AlphaSpline(std::vector<double> knots, std::vector<double> values);
  /// Tabulated data for water, 0 to 99.63 degrees Celsius.
  static AlphaSpline water();

  double value(double theta) const;
  /// Slope of the segment containing theta; the left segment at a knot.
  double slope(double theta) const;
  /// Exact integral of the spline from a to b.
  double integral(double a, double b) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

 private:
  int segment(double theta) const;
  double antiderivative(double theta) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  std::vector<double> cumulative_;  ///< integral from knots_[0] to knots_[i]
};

struct MaterialState {
  double alpha = 0.0;
  double alpha_slope = 0.0;
  double int_alpha = 0.0;  ///< integral of alpha from theta_ref to theta
  double rho = 0.0;
  double drho = 0.0;
  double d2rho = 0.0;
  double nu = 0.0;
  double dnu = 0.0;
};

/// Throws NonphysicalTemperatureError for theta <= 0 or non-finite theta.
MaterialState material_eval(const MaterialParams& params, const AlphaSpline& spline, double theta);

}  // namespace goalfem
