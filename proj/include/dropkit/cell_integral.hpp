#pragma once

// Exact integrals over a pair of unit lattice cells, used as the near-field
// correction of the pairwise quadrature.

namespace dropkit {

/// Double integral of |x-y|^{-q} over [0,1]^N x [0,1]^N, for q < N.
/// Computed by a cube-shell change of variables: the radial factor is
/// integrated exactly and the remaining face integral by tensor Gauss-Legendre.
/// Results are memoized; if DROPKIT_CACHE_DIR is set they are also read from and
/// appended to $DROPKIT_CACHE_DIR/cell_integrals.txt.
double unit_cell_pair_integral(int dimension, double q);

/// gamma(N, lambda) = D(unit cell) = (1/2) unit_cell_pair_integral(N, lambda).
double unit_cell_self_energy(int dimension, double lambda);

/// P(|X - Y| < r) for X, Y independent uniform in [0,1]^N, i.e. the measure of
/// {(x,y) in C x C : |x-y| < r} for the unit cell C.
double unit_cell_distance_cdf(int dimension, double r, int nodes_per_piece = 61);

}  // namespace dropkit
