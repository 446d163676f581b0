#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dropkit::numerics {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Gauss-Legendre on [a, b] using a precomputed rule on [-1, 1].
double integrate(const QuadratureRule& rule, double a, double b,
                 const std::function<double(double)>& f);

/// Double-exponential (tanh-sinh) quadrature on [a, b] with `nodes` abscissae.
/// The integrand is never evaluated at the endpoints; integrable endpoint
/// singularities are handled with exponential convergence.
double tanh_sinh(const std::function<double(double)>& f, double a, double b, int nodes);

/// Root of a continuous f on [lo, hi] with f(lo) < 0 < f(hi) (or the reverse).
/// Stops when hi - lo <= abs_tol or the bracket cannot shrink further.
double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol);

/// Number of worker threads used by parallel kernels (>= 1).
unsigned thread_count();
/// 0 selects std::thread::hardware_concurrency().
void set_thread_count(unsigned n);

/// Runs body(block) for block in [0, blocks) on up to thread_count() threads.
/// Callers make results independent of scheduling by writing per-block output.
void parallel_blocks(std::size_t blocks, const std::function<void(std::size_t)>& body);

}  // namespace dropkit::numerics
