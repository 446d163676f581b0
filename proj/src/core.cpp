#include "dropkit/core.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dropkit/errors.hpp"

namespace dropkit {

RieszParams::RieszParams(int dimension, double exponent)
    : dimension_(dimension), exponent_(exponent) {
  if (dimension < 2) {
    throw ParameterError("dimension must be an integer >= 2, got " + std::to_string(dimension));
  }
  if (!std::isfinite(exponent) || !(exponent > 0.0) || !(exponent < dimension)) {
    throw ParameterError("lambda must be in (0,N)");
  }
}

double RieszParams::perimeter_exp() const {
  return static_cast<double>(dimension_ - 1) / dimension_;
}

double RieszParams::riesz_exp() const { return (2.0 * dimension_ - exponent_) / dimension_; }

double RieszParams::gap_exp() const { return (dimension_ + 1.0 - exponent_) / dimension_; }

Mass::Mass(double value) : value_(value) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw ParameterError("mass must be a finite positive number");
  }
}

double unit_ball_volume(int dimension) {
  if (dimension < 1) {
    throw ParameterError("unit_ball_volume: dimension must be >= 1");
  }
  // omega_0 = 1, omega_1 = 2, omega_N = (2 pi / N) omega_{N-2}
  double omega = (dimension % 2 == 0) ? 1.0 : 2.0;
  for (int n = (dimension % 2 == 0) ? 2 : 3; n <= dimension; n += 2) {
    omega *= 2.0 * std::numbers::pi / n;
  }
  return omega;
}

double unit_sphere_area(int dimension) {
  if (dimension < 2) {
    throw ParameterError("unit_sphere_area: dimension must be >= 2");
  }
  return dimension * unit_ball_volume(dimension);
}

EnergyBreakdown energy_scale(const EnergyBreakdown& unit_breakdown, const RieszParams& params,
                             Mass m) {
  const double perimeter = std::pow(m.value(), params.perimeter_exp()) * unit_breakdown.perimeter;
  const double riesz = std::pow(m.value(), params.riesz_exp()) * unit_breakdown.riesz;
  return EnergyBreakdown::from_parts(perimeter, riesz);
}

}  // namespace dropkit
