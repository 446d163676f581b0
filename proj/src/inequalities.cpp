#include "dropkit/inequalities.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dropkit/errors.hpp"
#include "dropkit/numerics.hpp"

namespace dropkit {

std::vector<double> open_unit_grid(int grid_size) {
  if (grid_size < 1) {
    throw ParameterError("grid size must be positive");
  }
  std::vector<double> grid(grid_size);
  const double denom = grid_size + 1.0;
  for (int i = 1; i <= grid_size; ++i) {
    grid[i - 1] = i / denom;
  }
  return grid;
}

namespace {

void require_open_unit(double s, const char* what) {
  if (!(s > 0.0 && s < 1.0)) {
    throw ParameterError(std::string(what) + ": s must be in (0,1)");
  }
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

double f_of_s(const RieszParams& params, double s) {
  require_open_unit(s, "f_of_s");
  const double a = params.perimeter_exp();
  const double b = params.riesz_exp();
  const double t = 1.0 - s;
  const double numerator = std::pow(s, a) + std::pow(t, a) - 1.0;
  const double denominator = 1.0 - std::pow(s, b) - std::pow(t, b);
  if (!(denominator > 0.0)) {
    throw InternalError("f_of_s: nonpositive denominator");
  }
  return numerator / denominator;
}

double f_half_closed_form(const RieszParams& params) {
  const int n = params.dimension();
  return (std::pow(2.0, 1.0 / n) - 1.0) /
         (1.0 - std::pow(2.0, (params.exponent() - n) / n));
}

FMinCertificate f_min_certify(const RieszParams& params, int grid_size, double tol) {
  if (grid_size < 3) {
    throw ParameterError("f_min_certify: grid_size must be >= 3");
  }
  if (grid_size % 2 == 0) {
    ++grid_size;
  }
  FMinCertificate cert;
  cert.grid_size = grid_size;
  cert.min_value = std::numeric_limits<double>::infinity();
  const double denom = grid_size + 1.0;
  for (int i = 1; i <= grid_size; ++i) {
    const double s = i / denom;
    const double v = f_of_s(params, s);
    if (v < cert.min_value) {
      cert.min_value = v;
      cert.argmin = s;
    }
  }
  const double cell = 1.0 / denom;
  cert.matches_closed_form = std::abs(cert.min_value - f_half_closed_form(params)) <= tol &&
                             std::abs(cert.argmin - 0.5) <= cell * (1.0 + 1e-9);
  return cert;
}

double g_alpha(double alpha, double s) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw ParameterError("g_alpha: alpha must be in (0,2)");
  }
  if (!(s >= 0.0 && s <= 1.0)) {
    throw ParameterError("g_alpha: s must be in [0,1]");
  }
  const double t = 1.0 - s;
  const double coeff = (std::pow(2.0, 1.0 - alpha) - 1.0) / std::numbers::ln2;
  return std::pow(s, alpha) + std::pow(t, alpha) - 1.0 + coeff * (xlogx(s) + xlogx(t));
}

double h_alpha(double alpha, double s) {
  if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0) {
    throw ParameterError("h_alpha: alpha must be in (0,1) or (1,2)");
  }
  if (!(s > 0.0 && s <= 0.5)) {
    throw ParameterError("h_alpha: s must be in (0,1/2]");
  }
  s = std::max(s, 1e-300);
  const double t = 1.0 - s;
  const double coeff = (std::pow(2.0, 1.0 - alpha) - 1.0) / std::numbers::ln2;
  const double bracket =
      std::pow(s, alpha - 1.0) + std::pow(t, alpha - 1.0) - std::pow(s, alpha) - std::pow(t, alpha);
  return alpha * (alpha - 1.0) * bracket + coeff;
}

bool LemmaGReport::all_checks_passed() const {
  if (alpha == 1.0) {
    return passed;
  }
  return passed && h_increasing && h_sign_changes == 1;
}

LemmaGReport lemma_g_verify(double alpha, int grid_size, bool keep_curve) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw ParameterError("lemma_g_verify: alpha must be in (0,2)");
  }
  if (grid_size < 100) {
    throw ParameterError("lemma_g_verify: grid_size must be >= 100");
  }
  LemmaGReport report;
  report.alpha = alpha;
  const std::vector<double> grid = open_unit_grid(grid_size);
  if (keep_curve) {
    report.s_grid = grid;
    report.g_values.reserve(grid.size());
  }

  if (alpha == 1.0) {
    if (keep_curve) {
      report.g_values.assign(grid.size(), 0.0);
    }
    report.min_g = 0.0;
    report.argmin_g = 0.5;
    report.passed = true;
    return report;
  }

  report.min_g = std::numeric_limits<double>::infinity();
  for (double s : grid) {
    const double g = g_alpha(alpha, s);
    if (keep_curve) {
      report.g_values.push_back(g);
    }
    if (g < report.min_g) {
      report.min_g = g;
      report.argmin_g = s;
    }
  }
  report.passed = report.min_g >= -kScalarTol;

  // h on the grid points in (0, 1/2]
  double prev_h = 0.0;
  double prev_s = 0.0;
  int prev_sign = 0;
  bool first = true;
  for (double s : grid) {
    if (s > 0.5) {
      break;
    }
    const double h = h_alpha(alpha, s);
    if (!first && h - prev_h <= -kScalarTol) {
      report.h_increasing = false;
    }
    const int sign = (h > 0.0) - (h < 0.0);
    if (sign != 0) {
      if (prev_sign != 0 && sign != prev_sign) {
        ++report.h_sign_changes;
        if (report.h_sign_changes == 1) {
          const double lo = prev_s;
          report.h_sign_change = numerics::bisect(
              [alpha](double x) { return h_alpha(alpha, x); }, lo, s, 1e-15);
        }
      }
      prev_sign = sign;
      prev_s = s;
    }
    prev_h = h;
    first = false;
  }
  return report;
}

double binding_lower_bound(const RieszParams& params, double m, double s, double energy_m,
                           const BallConstants& constants) {
  require_open_unit(s, "binding_lower_bound");
  if (!(m > 0.0)) {
    throw ParameterError("binding_lower_bound: mass must be positive");
  }
  const double a = params.perimeter_exp();
  const double u = m / constants.volume;
  return std::pow(s, params.riesz_exp()) * energy_m +
         (1.0 - std::pow(s, params.gap_exp())) * std::pow(s, a) * std::pow(u, a) *
             constants.surface;
}

double binding_deficit_lower(const RieszParams& params, const BallConstants& constants, double m,
                             double s) {
  require_open_unit(s, "binding_deficit_lower");
  if (!(m > 0.0)) {
    throw ParameterError("binding_deficit_lower: mass must be positive");
  }
  const double b = params.riesz_exp();
  const double u = m / constants.volume;
  const double riesz_gap = std::pow(s, b) + std::pow(1.0 - s, b) - 1.0;
  const double ratio = constants.riesz_self / constants.surface * std::pow(u, params.gap_exp());
  return riesz_gap * std::pow(u, params.perimeter_exp()) * constants.surface *
         (ratio - f_of_s(params, s));
}

const char* to_string(BindingVerdict verdict) {
  return verdict == BindingVerdict::strict_binding_certified ? "strict_binding_certified"
                                                             : "inconclusive";
}

BindingReport binding_scan(const RieszParams& params, const BallConstants& constants, double m,
                           int grid_size) {
  if (grid_size < 100) {
    throw ParameterError("binding_scan: grid_size must be >= 100");
  }
  BindingReport report{params, m, open_unit_grid(grid_size), {}, 0.0, 0.0,
                       BindingVerdict::inconclusive};
  report.deficit_lb.resize(report.s_grid.size());
  report.min_deficit = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < report.s_grid.size(); ++i) {
    const double v = binding_deficit_lower(params, constants, m, report.s_grid[i]);
    report.deficit_lb[i] = v;
    if (v < report.min_deficit) {
      report.min_deficit = v;
      report.argmin_s = report.s_grid[i];
    }
  }
  report.verdict = report.min_deficit > 0.0 ? BindingVerdict::strict_binding_certified
                                            : BindingVerdict::inconclusive;
  return report;
}

double uniqueness_gap(const RieszParams& params, const BallConstants& constants, double m) {
  const double m_star = critical_mass(params, constants);
  if (!(m > 0.0 && m < m_star)) {
    throw ParameterError("uniqueness_gap: mass must be in (0, m*)");
  }
  const double s = m / m_star;
  const double lower = binding_lower_bound(params, m_star, s,
                                           ball_energy(params, m_star, constants).total, constants);
  return ball_energy(params, m, constants).total - lower;
}

}  // namespace dropkit
