#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dropkit/analytic.hpp"
#include "dropkit/core.hpp"
#include "dropkit/shapes.hpp"

namespace dropkit {

/// Energy of k equal balls of total volume m at infinite mutual separation.
double split_energy(const RieszParams& params, const BallConstants& constants, double m, int k);

struct SplitReport {
  RieszParams params;
  double m = 0.0;
  std::vector<std::pair<int, double>> energies_by_k;
  int best_k = 1;
  double best_total = 0.0;
};

/// Evaluates k = 1..k_max; ties go to the smaller k.
SplitReport best_split(const RieszParams& params, const BallConstants& constants, double m,
                       int k_max);

/// Smallest mass on the grid lo, lo+step, ... (<= hi) whose best split has k >= 2;
/// returns NaN when there is none.
double first_split_mass(const RieszParams& params, const BallConstants& constants, double lo,
                        double hi, double step, int k_max);

/// c_N = average over the unit sphere of (nu . e)_+, by Gauss-Legendre on the
/// polar reduction |S^{N-2}| int_0^{pi/2} cos t sin^{N-2} t dt / |S^{N-1}|.
double angular_constant(int dimension, int quad_nodes = 64);

/// Closed reduction |S^{N-2}| / ((N-1) |S^{N-1}|).
double angular_constant_closed(int dimension);

struct NecessaryConditionReport {
  double moment = 0.0;   // double integral of |x-y|^{1-lambda}
  double measure = 0.0;
  double c_n = 0.0;
  double bound = 0.0;    // 2 measure / c_N
  bool satisfied = false;
  double margin = 0.0;   // bound - moment
};

/// Necessary condition for minimality: (c_N/2) moment <= measure. A violation
/// certifies that the shape is not a minimizer; satisfaction proves nothing.
NecessaryConditionReport necessary_condition(const GridShape& shape, const RieszParams& params);

/// Double integral of |x-y|^{1-lambda} over B_1 x B_1 (radial quadrature or MC).
Estimate ball_moment_unit(const RieszParams& params,
                          SelfEnergyMethod method = SelfEnergyMethod::radial_quadrature,
                          std::uint64_t budget = kDefaultRadialNodes,
                          std::uint64_t seed = kDefaultSeed);

/// Upper bound on the mass of any minimizer, for 0 < lambda <= 1:
///   lambda = 1: 2 / c_N;  lambda < 1: w (2 w / (c_N M_1))^{N/(N+1-lambda)}.
/// Throws UnsupportedError for lambda > 1.
double nonexistence_mass_bound(const RieszParams& params, const BallConstants& constants,
                               double ball_moment_unit);

}  // namespace dropkit
