// Closed-form tail quantities: the bivariate residual dependence index
// eta = ((1+rho)/2)^{theta/2}, the limit function S(x,y) = (xy)^{1/(2 eta)},
// partial indices from the quadratic program, the Gaussian joint-tail
// expansion, the Kotz marginal-tail asymptote, and joint-survival expansions.
//
// Convention: with q the QP minimum and alpha = sqrt(q), the partial index is
// eta_I = q^{-theta/2} and gamma_j = mu_j alpha^{theta-2}. This reproduces the
// bivariate formulas exactly; the raw-q reading (eta = q^{-theta},
// gamma_j = mu_j q^{theta-1}) is also exposed so the two can be discriminated
// empirically against the survival oracle.

#ifndef TAILDEP_TAIL_THEORY_HPP
#define TAILDEP_TAIL_THEORY_HPP

#include <optional>

#include "taildep/alpha_qp.hpp"
#include "taildep/model_core.hpp"

namespace taildep {

struct BivariateIndex {
  double rho = 0.0;
  double theta = 0.0;
  double alpha_rho = 0.0;   // sqrt(2/(1+rho))
  double lambda_rho = 0.0;  // sqrt(2(1+rho))
  double eta = 0.0;         // ((1+rho)/2)^{theta/2}
};

BivariateIndex bivariate_index(double rho, double theta);

// S(x,y) = (xy)^{1/(2 eta)}; satisfies S(cx,cy) = c^{1/eta} S(x,y).
double limit_S(double x, double y, double eta);

struct PartialIndex {
  AlphaSolution solution;
  double theta = 0.0;
  double eta = 0.0;                    // q^{-theta/2}
  std::vector<double> gamma;           // mu_j alpha^{theta-2}, over K
  double eta_literal = 0.0;            // q^{-theta}
  std::vector<double> gamma_literal;   // mu_j q^{theta-1}, over K
};

PartialIndex partial_index(const AlphaSolution& sol, double theta);

// Bivariate Gaussian joint-tail expansion of the copula survival at the
// common 1 - 1/u level:
//   (1-rho^2)^{3/2}/(1-rho)^2 (4 pi)^{-rho/(1+rho)} (ln u)^{-rho/(1+rho)}
//   u^{-2/(1+rho)}.
double log_gaussian_expansion(double rho, double u);
double gaussian_expansion(double rho, double u);

// Marginal-tail asymptote of a bivariate Kotz model:
//   1 - Q(u) ~ K/sqrt(2 pi r theta) u^{N-theta/2} exp(-r u^theta).
double log_kotz_marginal_tail(const RadialLaw& kotz, double u);

// Two-term expansion of the marginal quantile b(u) = Q^{-1}(1 - 1/u) for a
// bivariate Kotz model.
double kotz_b_of_u(const RadialLaw& kotz, double u);

// Joint-survival expansion at the common 1 - 1/u level for a bivariate model:
// the general form
//   alpha_rho^2 (1-rho^2)^{3/2} / (2 pi (1-rho)^2)
//     * (1 - F(b*(u))) / (b*(u) w(b*(u))),   b*(u) = alpha_rho Q^{-1}(1-1/u),
// evaluated with the oracle marginal quantile, plus (for Kotz radial laws)
// the fully closed display in u alone.
struct StildeExpansion {
  double log_general = 0.0;
  std::optional<double> log_kotz_closed;
};
StildeExpansion stilde_expansion(const EllipticalModel& model, double u);

}  // namespace taildep

#endif  // TAILDEP_TAIL_THEORY_HPP
