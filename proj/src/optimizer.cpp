#include "dropkit/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dropkit/errors.hpp"

namespace dropkit {

EnergyBreakdown shape_energy(const FourierShape& shape, const RieszParams& params,
                             const OptimizeOptions& options) {
  TotalEnergyOptions energy_options;
  energy_options.relative_cell_size = options.relative_cell_size;
  energy_options.perimeter_nodes = options.perimeter_nodes;
  return total_energy(shape, params, energy_options);
}

namespace {

void validate(const RieszParams& params, double m, const OptimizeOptions& options) {
  if (params.dimension() != 2) {
    throw ParameterError("optimizer: only N = 2 is supported");
  }
  if (!std::isfinite(m) || !(m > 0.0)) {
    throw ParameterError("optimizer: mass must be positive");
  }
  if (!(options.relative_cell_size > 0.0) || !(options.step_init > 0.0) ||
      !(options.step_min > 0.0) || options.max_iter < 0) {
    throw ParameterError("optimizer: invalid options");
  }
}

FourierShape shape_from(const std::vector<double>& coeffs, int modes, double m) {
  std::vector<double> a(coeffs.begin(), coeffs.begin() + modes);
  std::vector<double> b(coeffs.begin() + modes, coeffs.end());
  return FourierShape(1.0, std::move(a), std::move(b)).with_area(m);
}

}  // namespace

OptimizationResult optimize_shape(const RieszParams& params, double m, int modes,
                                  const OptimizeOptions& options,
                                  const std::optional<FourierShape>& start) {
  if (modes < 1) {
    throw ParameterError("optimize_shape: need at least one Fourier mode");
  }
  validate(params, m, options);

  std::vector<double> coeffs(2 * static_cast<std::size_t>(modes), 0.0);
  if (start) {
    for (int k = 0; k < std::min(modes, start->modes()); ++k) {
      coeffs[k] = start->cos_coeffs()[k];
      coeffs[modes + k] = start->sin_coeffs()[k];
    }
  }
  FourierShape current = shape_from(coeffs, modes, m);
  if (!current.is_valid()) {
    throw ParameterError("optimize_shape: start shape has r(theta) <= 0");
  }
  EnergyBreakdown energy = shape_energy(current, params, options);

  OptimizationResult result;
  result.history.emplace_back(0, energy.total);

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(coeffs.size());
  std::iota(order.begin(), order.end(), 0);

  double step = options.step_init;
  int iterations = 0;
  while (step >= options.step_min && iterations < options.max_iter) {
    std::shuffle(order.begin(), order.end(), rng);
    bool accepted_any = false;
    for (std::size_t idx : order) {
      for (double sign : {1.0, -1.0}) {
        if (iterations >= options.max_iter) {
          break;
        }
        std::vector<double> trial = coeffs;
        trial[idx] += sign * step;
        const FourierShape candidate = shape_from(trial, modes, m);
        if (!candidate.is_valid()) {
          continue;  // infeasible proposal, not counted as an evaluation
        }
        ++iterations;
        const EnergyBreakdown e = shape_energy(candidate, params, options);
        if (e.total < energy.total - options.decrease_floor * std::abs(energy.total)) {
          coeffs = std::move(trial);
          current = candidate;
          energy = e;
          accepted_any = true;
          result.history.emplace_back(iterations, energy.total);
          break;  // next coordinate
        }
      }
    }
    if (!accepted_any) {
      step *= 0.5;
    }
  }

  result.shape = current;
  result.energy = energy;
  result.iterations = iterations;
  result.converged = step < options.step_min;
  return result;
}

std::vector<CurvePoint> perturbation_curve(const RieszParams& params, double m, int mode,
                                           const std::vector<double>& amplitudes,
                                           const OptimizeOptions& options) {
  if (mode < 2) {
    throw ParameterError("perturbation_curve: mode must be >= 2 (k = 1 is a translation)");
  }
  validate(params, m, options);
  std::vector<CurvePoint> curve;
  curve.reserve(amplitudes.size());
  for (double eps : amplitudes) {
    std::vector<double> a(static_cast<std::size_t>(mode), 0.0);
    a[mode - 1] = eps;
    const FourierShape shape = FourierShape(1.0, a, {}).with_area(m);
    CurvePoint point{eps, 0.0, shape.is_valid()};
    if (point.feasible) {
      point.total = shape_energy(shape, params, options).total;
    } else {
      point.total = std::nan("");
    }
    curve.push_back(point);
  }
  return curve;
}

}  // namespace dropkit
