// Log-domain numerics: stable elementary pieces, adaptive quadrature of
// exp(f) with max-shift factoring, and a bracketed root finder. All tail
// arithmetic in this project stays in log scale; linear-scale probabilities
// below exp(-700) are never materialized.

#ifndef TAILDEP_MATH_HPP
#define TAILDEP_MATH_HPP

#include <cmath>
#include <functional>
#include <span>

namespace taildep {

// Sentinel for "log of an effectively-zero probability". Finite so that
// differences with other log values never produce NaN.
inline constexpr double kLogZero = -1e308;

// ln(1 - e^x) for x < 0.
inline double log1mexp(double x) {
  if (x >= 0.0) return kLogZero;
  if (x > -0.6931471805599453) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

// ln(e^a + e^b).
inline double logsumexp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b <= kLogZero || a - b > 745.0) return a;
  return a + std::log1p(std::exp(b - a));
}

double logsumexp(std::span<const double> xs);

// ln erfc(x), accurate over the whole real line (continued fraction in the
// far tail where std::erfc underflows).
double log_erfc(double x);

// Standard normal log survival ln(1 - Phi(x)) and quantile Phi^{-1}(p).
inline double log_normal_sf(double x) {
  return -0.6931471805599453 + log_erfc(x * 0.7071067811865476);
}
double normal_quantile(double p);

// log of integral_a^b exp(log_f(x)) dx by adaptive Simpson refinement after
// factoring out the max of log_f on a coarse scan. Panels whose log-integrand
// sits more than `cutoff_nats` below the max are accepted without refinement.
// Throws QuadratureFailure when refinement does not converge.
double log_adaptive_integral(const std::function<double(double)>& log_f,
                             double a, double b, double rel_tol,
                             int coarse_points = 33, double cutoff_nats = 60.0);

// Root of f on [lo, hi] (f(lo), f(hi) of opposite sign or zero) by Brent's
// method. Throws ConvergenceFailure after max_iter iterations.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double rel_tol = 1e-13, int max_iter = 200);

// Ordinary least squares of y against x; returns {slope, intercept,
// max |residual|}.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace taildep

#endif  // TAILDEP_MATH_HPP
