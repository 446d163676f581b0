#include "dropkit/analytic.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "dropkit/errors.hpp"
#include "dropkit/numerics.hpp"

namespace dropkit {

std::string to_string(SelfEnergyMethod method) {
  switch (method) {
    case SelfEnergyMethod::analytic:
      return "analytic";
    case SelfEnergyMethod::radial_quadrature:
      return "radial";
    case SelfEnergyMethod::monte_carlo:
      return "mc";
  }
  return "unknown";
}

SelfEnergyMethod self_energy_method_from_string(const std::string& name) {
  if (name == "radial" || name == "radial_quadrature") {
    return SelfEnergyMethod::radial_quadrature;
  }
  if (name == "mc" || name == "monte_carlo") {
    return SelfEnergyMethod::monte_carlo;
  }
  throw ParameterError("unknown self-energy method '" + name + "' (expected radial|mc)");
}

BallConstants BallConstants::with_riesz_scaled(double factor) const {
  BallConstants scaled = *this;
  scaled.riesz_self *= factor;
  scaled.riesz_self_stderr *= factor;
  return scaled;
}

namespace {

constexpr std::uint64_t kBlockSize = std::uint64_t{1} << 20;

// Fraction of |B_1| covered by B_1 intersected with B_1 + r e, written as the
// regularized incomplete beta function I_{1-r^2/4}((N+1)/2, 1/2). The argument is
// passed as 1 - r^2/4 to keep precision when r -> 2.
double lens_fraction(int dimension, double one_minus_quarter_r2) {
  if (one_minus_quarter_r2 <= 0.0) {
    return 0.0;
  }
  if (one_minus_quarter_r2 >= 1.0) {
    return 1.0;
  }
  return boost::math::ibeta(0.5 * (dimension + 1), 0.5, one_minus_quarter_r2);
}

Estimate radial_pair_integral(int dimension, double q, std::uint64_t nodes) {
  if (nodes < 3 || nodes > 1000000) {
    throw ParameterError("radial quadrature budget must be in [3, 1e6] nodes");
  }
  const double omega = unit_ball_volume(dimension);
  const double power = dimension - q;  // > 0
  // r = 2 t^{1/power} turns r^{N-1-q} dr into 2^{power}/power dt.
  const auto integrand = [&](double t) {
    const double one_minus = -std::expm1((2.0 / power) * std::log(t));
    return lens_fraction(dimension, one_minus);
  };
  const double integral = numerics::tanh_sinh(integrand, 0.0, 1.0, static_cast<int>(nodes));
  const double value = omega * omega * dimension * std::pow(2.0, power) / power * integral;
  if (!std::isfinite(value)) {
    throw NumericError("radial pair integral is not finite");
  }
  return {value, 0.0};
}

void uniform_in_ball(std::mt19937_64& rng, std::normal_distribution<double>& normal,
                     std::uniform_real_distribution<double>& uniform, std::vector<double>& x) {
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& c : x) {
      c = normal(rng);
      norm2 += c * c;
    }
  } while (norm2 == 0.0);
  const double radius = std::pow(uniform(rng), 1.0 / static_cast<double>(x.size()));
  const double scale = radius / std::sqrt(norm2);
  for (double& c : x) {
    c *= scale;
  }
}

Estimate monte_carlo_pair_integral(int dimension, double q, std::uint64_t samples,
                                   std::uint64_t seed) {
  if (samples < 2) {
    throw ParameterError("monte carlo budget must be at least 2 pairs");
  }
  const std::size_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<double> sums(blocks, 0.0);
  std::vector<double> sums_sq(blocks, 0.0);
  numerics::parallel_blocks(blocks, [&](std::size_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> x(dimension);
    std::vector<double> y(dimension);
    const std::uint64_t begin = b * kBlockSize;
    const std::uint64_t end = std::min(samples, begin + kBlockSize);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t i = begin; i < end; ++i) {
      uniform_in_ball(rng, normal, uniform, x);
      uniform_in_ball(rng, normal, uniform, y);
      double d2 = 0.0;
      for (int k = 0; k < dimension; ++k) {
        const double d = x[k] - y[k];
        d2 += d * d;
      }
      const double v = std::pow(d2, -0.5 * q);
      sum += v;
      sum_sq += v * v;
    }
    sums[b] = sum;
    sums_sq[b] = sum_sq;
  });
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    sum += sums[b];
    sum_sq += sums_sq[b];
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq / n - mean * mean) * n / (n - 1.0));
  const double omega = unit_ball_volume(dimension);
  const double scale = omega * omega;
  Estimate est{scale * mean, scale * std::sqrt(var / n)};
  if (!std::isfinite(est.value) || !std::isfinite(est.stderr_)) {
    throw NumericError("monte carlo pair integral is not finite");
  }
  return est;
}

}  // namespace

Estimate ball_pair_integral(int dimension, double q, SelfEnergyMethod method,
                            std::uint64_t budget, std::uint64_t seed) {
  if (dimension < 1) {
    throw ParameterError("dimension must be >= 1");
  }
  if (!(q < dimension)) {
    throw ParameterError("pair integral diverges for exponent >= N");
  }
  if (budget == 0) {
    throw ParameterError("budget must be positive");
  }
  switch (method) {
    case SelfEnergyMethod::radial_quadrature:
      return radial_pair_integral(dimension, q, budget);
    case SelfEnergyMethod::monte_carlo:
      return monte_carlo_pair_integral(dimension, q, budget, seed);
    case SelfEnergyMethod::analytic:
      break;
  }
  throw ParameterError("analytic self-energy is not provided; use radial or mc");
}

Estimate ball_riesz_self_energy(const RieszParams& params, SelfEnergyMethod method,
                                std::uint64_t budget, std::uint64_t seed) {
  const Estimate pair =
      ball_pair_integral(params.dimension(), params.exponent(), method, budget, seed);
  return {0.5 * pair.value, 0.5 * pair.stderr_};
}

BallConstants make_ball_constants(const RieszParams& params, SelfEnergyMethod method,
                                  std::uint64_t budget, std::uint64_t seed) {
  const Estimate self = ball_riesz_self_energy(params, method, budget, seed);
  BallConstants c;
  c.volume = unit_ball_volume(params.dimension());
  c.surface = unit_sphere_area(params.dimension());
  c.riesz_self = self.value;
  c.riesz_self_method = method;
  c.riesz_self_stderr = self.stderr_;
  return c;
}

EnergyBreakdown ball_energy(const RieszParams& params, double m, const BallConstants& constants) {
  if (!std::isfinite(m) || !(m > 0.0)) {
    throw ParameterError("ball_energy: mass must be positive");
  }
  const double u = m / constants.volume;
  return EnergyBreakdown::from_parts(std::pow(u, params.perimeter_exp()) * constants.surface,
                                     std::pow(u, params.riesz_exp()) * constants.riesz_self);
}

double critical_mass(const RieszParams& params, const BallConstants& constants) {
  if (!(constants.volume > 0.0 && constants.surface > 0.0 && constants.riesz_self > 0.0)) {
    throw ParameterError("critical_mass: ball constants must be positive");
  }
  const int n = params.dimension();
  const double lambda = params.exponent();
  const double ratio = (std::pow(2.0, 1.0 / n) - 1.0) / (1.0 - std::pow(2.0, (lambda - n) / n));
  return std::pow(ratio * constants.surface / constants.riesz_self, 1.0 / params.gap_exp()) *
         constants.volume;
}

double crossing_mass(const RieszParams& params, const BallConstants& constants) {
  if (!(constants.volume > 0.0 && constants.surface > 0.0 && constants.riesz_self > 0.0)) {
    throw ParameterError("crossing_mass: ball constants must be positive");
  }
  const auto excess = [&](double m) {
    return ball_energy(params, m, constants).total -
           2.0 * ball_energy(params, 0.5 * m, constants).total;
  };
  double hi = constants.volume;
  for (int i = 0; excess(hi) <= 0.0; ++i) {
    if (i > 2000 || !std::isfinite(hi)) {
      throw InternalError("crossing_mass: no upper bracket found");
    }
    hi *= 2.0;
  }
  double lo = constants.volume;
  for (int i = 0; excess(lo) >= 0.0; ++i) {
    if (i > 2000 || lo == 0.0) {
      throw InternalError("crossing_mass: no lower bracket found");
    }
    lo *= 0.5;
  }
  return numerics::bisect(excess, lo, hi, 1e-12);
}

double conditional_threshold(const RieszParams& params, const BallConstants& constants,
                             double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("delta must be in (0,1)");
  }
  return critical_mass(params, constants) * std::pow(1.0 - delta, -1.0 / params.gap_exp());
}

}  // namespace dropkit
