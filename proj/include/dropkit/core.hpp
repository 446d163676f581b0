#pragma once

// Problem parameters, energy bookkeeping and the exact dilation law
//   E(t U) = t^{N-1} Per U + t^{2N-lambda} D(U).

namespace dropkit {

/// Ambient dimension N >= 2 and Riesz exponent 0 < lambda < N.
/// Validated once at construction; every other module assumes a valid instance.
class RieszParams {
 public:
  RieszParams(int dimension, double exponent);

  int dimension() const { return dimension_; }
  double exponent() const { return exponent_; }

  /// (N-1)/N, the mass exponent of the perimeter term.
  double perimeter_exp() const;
  /// (2N-lambda)/N, the mass exponent of the Riesz term.
  double riesz_exp() const;
  /// (N+1-lambda)/N = riesz_exp - perimeter_exp, always > 0.
  double gap_exp() const;

  bool operator==(const RieszParams&) const = default;

 private:
  int dimension_;
  double exponent_;
};

/// Perimeter part, Riesz part and their sum for one configuration.
struct EnergyBreakdown {
  double perimeter = 0.0;
  double riesz = 0.0;
  double total = 0.0;

  static EnergyBreakdown from_parts(double perimeter, double riesz) {
    return {perimeter, riesz, perimeter + riesz};
  }
};

/// Strictly positive volume.
class Mass {
 public:
  explicit Mass(double value);
  double value() const { return value_; }

 private:
  double value_;
};

/// |B_1| in R^N, via the exact recursion omega_N = 2 pi / N * omega_{N-2}.
double unit_ball_volume(int dimension);

/// Per B_1 = N * omega_N.
double unit_sphere_area(int dimension);

/// Energy of m^{1/N} U given the breakdown of a unit-volume U.
EnergyBreakdown energy_scale(const EnergyBreakdown& unit_breakdown, const RieszParams& params,
                             Mass m);

}  // namespace dropkit
