// Deterministic deep-tail evaluation of marginal and joint survival
// probabilities of elliptical vectors by quadrature over the angular measure,
// plus the derived objects: the copula-scale joint survival S~_u, the
// normalized S_u, chi(u), and regular-variation slope fits. This module is
// the ground-truth engine the limit theorems are verified against.
//
// Log-probabilities below kLogFloor (= -600) raise the typed Underflow signal
// rather than flushing to zero. Dimension support is k in {2, 3}.

#ifndef TAILDEP_SURVIVAL_ORACLE_HPP
#define TAILDEP_SURVIVAL_ORACLE_HPP

#include <vector>

#include "taildep/model_core.hpp"

namespace taildep {

// ln P{X_1 > a} for a >= 0 (= ln 1/2 at a = 0 by symmetry).
double marginal_survival(const EllipticalModel& model, double a);

// Inverse of the marginal distribution at p in (0.5, 1). Probabilities closer
// to 1 than doubles can hold (beyond ~1 - 1e-16) must go through the
// log-survival form below.
double marginal_quantile(const EllipticalModel& model, double p);

// a with ln P{X_1 > a} = target, for target in [-640, ln 1/2); reaches depths
// the p parameterization cannot represent.
double marginal_quantile_log(const EllipticalModel& model, double target);

// ln P{X_1 > a, X_2 > b}, bivariate models, a, b > 0.
double joint_survival_2d(const EllipticalModel& model, double a, double b);

// ln P{X_1 > a1, X_2 > a2, X_3 > a3}, trivariate models.
double joint_survival_3d(const EllipticalModel& model, double a1, double a2, double a3);

// ln S~_{u,I}(x) = ln P{Q(X_i) > 1 - x_i/u for i in I}; |I| in {2, 3},
// indices 0-based, u > max x_i.
double s_tilde(const EllipticalModel& model, const std::vector<int>& I,
               const std::vector<double>& x, double u);

// chi(u) = P{X_1 > u, X_2 > u} / P{X_1 > u} at raw levels u.
std::vector<std::pair<double, double>> chi_curve(const EllipticalModel& model,
                                                 const std::vector<double>& u_levels);

struct SlopeFit {
  std::vector<double> u_grid;
  std::vector<double> log_values;  // ln S~_u(1)
  double slope = 0.0;              // least squares of ln S~ against ln u
  double intercept = 0.0;
  double max_residual = 0.0;
};

// Regular-variation slope of ln S~_{u,I}(1) against ln u; the grid must be
// increasing with >= 5 points spanning >= 4 decades.
SlopeFit rv_slope(const EllipticalModel& model, const std::vector<int>& I,
                  const std::vector<double>& u_grid);

}  // namespace taildep

#endif  // TAILDEP_SURVIVAL_ORACLE_HPP
