#pragma once

#include <cstdint>
#include <string>

#include "dropkit/core.hpp"

namespace dropkit {

enum class SelfEnergyMethod { analytic, radial_quadrature, monte_carlo };

std::string to_string(SelfEnergyMethod method);
SelfEnergyMethod self_energy_method_from_string(const std::string& name);

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;  // 0 for deterministic methods
};

/// Unit-ball constants for one (N, lambda): |B_1|, Per B_1 and D(B_1).
struct BallConstants {
  double volume = 0.0;
  double surface = 0.0;
  double riesz_self = 0.0;
  SelfEnergyMethod riesz_self_method = SelfEnergyMethod::radial_quadrature;
  double riesz_self_stderr = 0.0;

  /// Same constants with D(B_1) multiplied by `factor` (the (1-delta) variant).
  BallConstants with_riesz_scaled(double factor) const;
};

inline constexpr int kDefaultRadialNodes = 401;
inline constexpr std::uint64_t kDefaultSeed = 20210601;

/// Double integral of |x-y|^{-q} over B_1 x B_1 in R^N, for q < N (q may be <= 0).
/// radial_quadrature: one-dimensional integral against the pair-distance density of
/// two uniform points in the ball; `budget` is the tanh-sinh node count.
/// monte_carlo: i.i.d. uniform pairs; `budget` is the pair count. Samples are drawn
/// in fixed blocks of 2^20 pairs, block b seeded from (seed, b), so the result does
/// not depend on the number of threads.
Estimate ball_pair_integral(int dimension, double q, SelfEnergyMethod method,
                            std::uint64_t budget, std::uint64_t seed = kDefaultSeed);

/// D(B_1) = (1/2) * ball_pair_integral(N, lambda).
Estimate ball_riesz_self_energy(const RieszParams& params, SelfEnergyMethod method,
                                std::uint64_t budget, std::uint64_t seed = kDefaultSeed);

BallConstants make_ball_constants(const RieszParams& params,
                                  SelfEnergyMethod method = SelfEnergyMethod::radial_quadrature,
                                  std::uint64_t budget = kDefaultRadialNodes,
                                  std::uint64_t seed = kDefaultSeed);

/// Energy of the ball of volume m: ((m/w)^{(N-1)/N} Per B_1, (m/w)^{(2N-lambda)/N} D(B_1)).
EnergyBreakdown ball_energy(const RieszParams& params, double m, const BallConstants& constants);

/// Closed-form critical mass
///   m* = ((2^{1/N}-1)/(1-2^{(lambda-N)/N}) * Per B_1 / D(B_1))^{N/(N+1-lambda)} |B_1|.
double critical_mass(const RieszParams& params, const BallConstants& constants);

/// Root of ball_energy(m) - 2 ball_energy(m/2), by bracketed bisection.
double crossing_mass(const RieszParams& params, const BallConstants& constants);

/// m* (1-delta)^{-N/(N+1-lambda)}, for 0 < delta < 1.
double conditional_threshold(const RieszParams& params, const BallConstants& constants,
                             double delta);

}  // namespace dropkit
