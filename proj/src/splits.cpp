#include "dropkit/splits.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dropkit/errors.hpp"
#include "dropkit/numerics.hpp"
#include "dropkit/quadrature.hpp"

namespace dropkit {

double split_energy(const RieszParams& params, const BallConstants& constants, double m, int k) {
  if (k < 1) {
    throw ParameterError("split_energy: k must be >= 1");
  }
  if (!(m > 0.0)) {
    throw ParameterError("split_energy: mass must be positive");
  }
  return k * ball_energy(params, m / k, constants).total;
}

SplitReport best_split(const RieszParams& params, const BallConstants& constants, double m,
                       int k_max) {
  if (k_max < 1) {
    throw ParameterError("best_split: k_max must be >= 1");
  }
  SplitReport report{params, m, {}, 1, std::numeric_limits<double>::infinity()};
  for (int k = 1; k <= k_max; ++k) {
    const double total = split_energy(params, constants, m, k);
    report.energies_by_k.emplace_back(k, total);
    if (total < report.best_total) {
      report.best_total = total;
      report.best_k = k;
    }
  }
  return report;
}

double first_split_mass(const RieszParams& params, const BallConstants& constants, double lo,
                        double hi, double step, int k_max) {
  if (!(step > 0.0) || !(lo > 0.0) || hi < lo) {
    throw ParameterError("first_split_mass: invalid mass grid");
  }
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long i = 0; i <= count; ++i) {
    const double m = lo + static_cast<double>(i) * step;
    if (best_split(params, constants, m, k_max).best_k >= 2) {
      return m;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {
double sphere_area(int sphere_dim) {
  // |S^k| = (k+1) w_{k+1}
  return (sphere_dim + 1) * unit_ball_volume(sphere_dim + 1);
}
}  // namespace

double angular_constant_closed(int dimension) {
  if (dimension < 2) {
    throw ParameterError("angular_constant: dimension must be >= 2");
  }
  return sphere_area(dimension - 2) / ((dimension - 1) * sphere_area(dimension - 1));
}

double angular_constant(int dimension, int quad_nodes) {
  if (dimension < 2) {
    throw ParameterError("angular_constant: dimension must be >= 2");
  }
  const auto rule = numerics::gauss_legendre(quad_nodes);
  const double polar = numerics::integrate(rule, 0.0, 0.5 * std::numbers::pi, [&](double t) {
    return std::cos(t) * std::pow(std::sin(t), dimension - 2);
  });
  return sphere_area(dimension - 2) * polar / sphere_area(dimension - 1);
}

NecessaryConditionReport necessary_condition(const GridShape& shape, const RieszParams& params) {
  if (shape.dimension() != params.dimension()) {
    throw ParameterError("necessary_condition: shape and params dimensions differ");
  }
  NecessaryConditionReport report;
  report.moment = moment_integral(shape, 1.0 - params.exponent());
  report.measure = shape.measure();
  report.c_n = angular_constant_closed(params.dimension());
  report.bound = 2.0 * report.measure / report.c_n;
  report.margin = report.bound - report.moment;
  report.satisfied = report.margin >= 0.0;
  return report;
}

Estimate ball_moment_unit(const RieszParams& params, SelfEnergyMethod method,
                          std::uint64_t budget, std::uint64_t seed) {
  return ball_pair_integral(params.dimension(), params.exponent() - 1.0, method, budget, seed);
}

double nonexistence_mass_bound(const RieszParams& params, const BallConstants& constants,
                               double ball_moment_unit) {
  const double lambda = params.exponent();
  if (lambda > 2.0) {
    throw UnsupportedError("no computable bound for lambda>2: nonexistence is not established");
  }
  if (lambda > 1.0) {
    throw UnsupportedError(
        "no computable bound for 1<lambda<=2: the density lower bound used there has a "
        "nonconstructive constant");
  }
  const int n = params.dimension();
  const double c_n = angular_constant_closed(n);
  if (lambda == 1.0) {
    return 2.0 / c_n;
  }
  if (!(ball_moment_unit > 0.0)) {
    throw ParameterError("nonexistence_mass_bound: ball moment must be positive");
  }
  const double omega = constants.volume;
  return omega * std::pow(2.0 * omega / (c_n * ball_moment_unit), 1.0 / params.gap_exp());
}

}  // namespace dropkit
