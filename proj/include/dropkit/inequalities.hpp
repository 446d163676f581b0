#pragma once

#include <vector>

#include "dropkit/analytic.hpp"
#include "dropkit/core.hpp"

namespace dropkit {

/// Absolute tolerance for sign assertions on closed-form O(1) scalars.
inline constexpr double kScalarTol = 1e-12;

/// Open-interval grid s_i = i/(G+1), i = 1..G; symmetric about 1/2.
std::vector<double> open_unit_grid(int grid_size);

// ---------------------------------------------------------------------------
// Splitting ratio function and its minimum at s = 1/2

/// f(s) = (s^a + (1-s)^a - 1) / (1 - s^b - (1-s)^b), a = (N-1)/N, b = (2N-lambda)/N.
double f_of_s(const RieszParams& params, double s);

/// (2^{1/N} - 1) / (1 - 2^{(lambda-N)/N}), the value of f at 1/2.
double f_half_closed_form(const RieszParams& params);

struct FMinCertificate {
  double min_value = 0.0;
  double argmin = 0.0;
  bool matches_closed_form = false;
  int grid_size = 0;  // grid actually scanned (always odd)
};

/// Dense scan of f. An even grid_size is bumped to the next odd number so that
/// s = 1/2 is a grid node. Matches iff the grid minimum is within `tol` of the
/// closed form and the argmin is within one cell of 1/2.
FMinCertificate f_min_certify(const RieszParams& params, int grid_size, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Entropy sandwich g_alpha and the auxiliary h = s(1-s) g''

/// g(s) = s^a + (1-s)^a - 1 + (2^{1-a}-1)/log 2 * (s log s + (1-s) log(1-s)),
/// with 0 log 0 = 0, for 0 < alpha < 2 and s in [0,1].
double g_alpha(double alpha, double s);

/// h(s) = a(a-1)(s^{a-1} + (1-s)^{a-1} - s^a - (1-s)^a) + (2^{1-a}-1)/log 2,
/// for alpha in (0,2) \ {1} and s in (0, 1/2]. s is clamped below at 1e-300 so
/// the result stays finite as s -> 0.
double h_alpha(double alpha, double s);

struct LemmaGReport {
  double alpha = 0.0;
  std::vector<double> s_grid;
  std::vector<double> g_values;
  double min_g = 0.0;
  double argmin_g = 0.0;
  double h_sign_change = 0.0;  // s_1; 0 when alpha == 1
  int h_sign_changes = 0;      // sign flips of h on the grid points in (0, 1/2]
  bool h_increasing = true;    // consecutive h differences all > -tol
  bool passed = false;         // min_g >= -kScalarTol

  /// g bound plus the h monotonicity / single-sign-change checks (alpha != 1).
  bool all_checks_passed() const;
};

/// Scans g and h for one alpha. alpha == 1 short-circuits to g == 0, passed.
LemmaGReport lemma_g_verify(double alpha, int grid_size, bool keep_curve = true);

// ---------------------------------------------------------------------------
// Binding inequality

/// Dilation lower bound for E(s m) given any upper estimate E_m of E(m):
///   s^{(2N-lambda)/N} E_m + (1 - s^{(N+1-lambda)/N}) s^{(N-1)/N} (m/w)^{(N-1)/N} Per B_1.
double binding_lower_bound(const RieszParams& params, double m, double s, double energy_m,
                           const BallConstants& constants);

/// Certified lower bound for E(s m) + E((1-s) m) - E(m) using the ball as the
/// upper estimate of E(m).
double binding_deficit_lower(const RieszParams& params, const BallConstants& constants, double m,
                             double s);

enum class BindingVerdict { strict_binding_certified, inconclusive };

const char* to_string(BindingVerdict verdict);

struct BindingReport {
  RieszParams params;
  double m = 0.0;
  std::vector<double> s_grid;
  std::vector<double> deficit_lb;
  double min_deficit = 0.0;
  double argmin_s = 0.0;
  BindingVerdict verdict = BindingVerdict::inconclusive;
};

BindingReport binding_scan(const RieszParams& params, const BallConstants& constants, double m,
                           int grid_size);

/// Ball energy at m minus the chained lower bound through m*; identically zero
/// for 0 < m < m*.
double uniqueness_gap(const RieszParams& params, const BallConstants& constants, double m);

}  // namespace dropkit
