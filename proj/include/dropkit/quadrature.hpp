#pragma once

#include <cstdint>
#include <vector>

#include "dropkit/analytic.hpp"
#include "dropkit/core.hpp"
#include "dropkit/shapes.hpp"

namespace dropkit {

/// Ordered cell-pair counts of a GridShape by squared lattice distance:
/// counts[k] = #{(i, j) : |c_i - c_j|^2 = k h^2}. counts[0] is the cell count and
/// the counts sum to cell_count^2. Exact integers, so every energy built on the
/// histogram is invariant (bit for bit) under lattice translations, reflections
/// and axis permutations, and independent of the thread count.
struct DistanceHistogram {
  int dimension = 0;
  double cell_size = 0.0;
  std::int64_t cells = 0;
  std::vector<std::int64_t> counts;
};

DistanceHistogram distance_histogram(const GridShape& shape);

/// Periodic trapezoid rule for the arc length of r(theta).
double perimeter_fourier(const FourierShape& shape, int nodes);

/// Exposed cell faces times h^{N-1}. This is the l1 (anisotropic) perimeter and
/// does not converge to the Euclidean one; use for relative comparisons only.
double perimeter_grid(const GridShape& shape);

/// D(shape) by pairwise summation over cell centers plus the exact self-term of
/// each cell:  h^{2N-lambda} ( (1/2) sum_{k>0} counts[k] k^{-lambda/2} + M gamma(N,lambda) ).
double riesz_energy_grid(const GridShape& shape, double lambda);
double riesz_energy_grid(const DistanceHistogram& hist, double lambda);

/// Monte Carlo estimate of D(shape) from uniform pairs over the occupied cells.
/// Blocks of 2^20 pairs, block b seeded from (seed, b).
Estimate riesz_energy_mc(const GridShape& shape, double lambda, std::uint64_t samples,
                         std::uint64_t seed);

/// Double integral of |x-y|^p over shape x shape (no 1/2), p > -N.
double moment_integral(const GridShape& shape, double p);
double moment_integral(const DistanceHistogram& hist, double p);

struct LayerCakeResult {
  double direct = 0.0;
  double layered = 0.0;
  double rel_err = 0.0;
};

inline constexpr int kDefaultLayerNodes = 200;

/// Compares moment_integral(shape, 1 - lambda) with
///   (lambda - 1) int_0^inf R^{-lambda} |{(x,y) : |x-y| < R}| dR
/// evaluated on a graded R-mesh of `nodes` panels over (0, diam], with the
/// constant tail beyond diam integrated in closed form. 1 < lambda <= 2.
LayerCakeResult layer_cake_check(const GridShape& shape, double lambda,
                                 int nodes = kDefaultLayerNodes);

struct TotalEnergyOptions {
  double cell_size = 0.0;  // absolute h; 0 selects relative_cell_size * r0
  double relative_cell_size = 0.01;
  int perimeter_nodes = 1024;
  /// Evaluate the Riesz term on the rasterization dilated to the exact target
  /// area (D scales as t^{2N-lambda}); removes the volume jitter of the raster.
  bool volume_normalized = true;
  /// Place the lattice relative to the shape's centroid, so that rigid
  /// translations of the shape leave the rasterization unchanged.
  bool centroid_aligned = true;
};

/// Per via perimeter_fourier, D via riesz_energy_grid on rasterize(shape, h). N must be 2.
EnergyBreakdown total_energy(const FourierShape& shape, const RieszParams& params,
                             const TotalEnergyOptions& options = {});
/// Shorthand with an absolute cell size and perimeter node count.
EnergyBreakdown total_energy(const FourierShape& shape, const RieszParams& params,
                             double cell_size, int perimeter_nodes);

}  // namespace dropkit
