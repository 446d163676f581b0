#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dropkit/core.hpp"
#include "dropkit/quadrature.hpp"
#include "dropkit/shapes.hpp"

namespace dropkit {

struct OptimizeOptions {
  double relative_cell_size = 0.01;  // h = relative_cell_size * r0, recomputed per shape
  int perimeter_nodes = 1024;
  int max_iter = 10000;              // energy evaluations of proposals
  double step_init = 0.1;
  double step_min = 1e-4;
  std::uint64_t seed = 1;            // shuffles the coordinate order of each sweep
  double decrease_floor = 1e-9;      // accept only if total drops by > floor * |total|
};

struct OptimizationResult {
  FourierShape shape;
  EnergyBreakdown energy;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<int, double>> history;  // (iteration, total) at start and each acceptance
};

/// Volume-constrained coordinate pattern search over (a_1..a_K, b_1..b_K).
/// Each proposal moves one coefficient by +-step and restores the area m by
/// rescaling r0; it is accepted only on a strict decrease of the total energy.
/// The step halves after a sweep without acceptance; converged once it drops
/// below step_min. `start` (coefficients padded or truncated to K modes)
/// defaults to the disk.
OptimizationResult optimize_shape(const RieszParams& params, double m, int modes,
                                  const OptimizeOptions& options = {},
                                  const std::optional<FourierShape>& start = std::nullopt);

struct CurvePoint {
  double amplitude = 0.0;
  double total = 0.0;
  bool feasible = true;
};

/// Energies of r0(eps) (1 + eps cos k theta) at area m for each eps (k >= 2).
std::vector<CurvePoint> perturbation_curve(const RieszParams& params, double m, int mode,
                                           const std::vector<double>& amplitudes,
                                           const OptimizeOptions& options = {});

/// Energy of a Fourier shape using the optimizer's discretization settings.
EnergyBreakdown shape_energy(const FourierShape& shape, const RieszParams& params,
                             const OptimizeOptions& options);

}  // namespace dropkit
