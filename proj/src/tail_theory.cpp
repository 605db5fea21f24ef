#include "taildep/tail_theory.hpp"

#include <cmath>

#include "taildep/errors.hpp"
#include "taildep/math.hpp"
#include "taildep/survival_oracle.hpp"

namespace taildep {

namespace {
constexpr double kLog2Pi = 1.8378770664093455;
}

BivariateIndex bivariate_index(double rho, double theta) {
  if (!(rho > -1.0 + 1e-6 && rho < 1.0 - 1e-6))
    throw DomainError("bivariate_index: rho outside (-1, 1)");
  if (!(theta >= 0.0)) throw DomainError("bivariate_index: theta must be >= 0");
  BivariateIndex bi;
  bi.rho = rho;
  bi.theta = theta;
  bi.alpha_rho = std::sqrt(2.0 / (1.0 + rho));
  bi.lambda_rho = std::sqrt(2.0 * (1.0 + rho));
  bi.eta = std::pow(0.5 * (1.0 + rho), 0.5 * theta);
  return bi;
}

double limit_S(double x, double y, double eta) {
  if (!(x > 0.0 && y > 0.0)) throw DomainError("limit_S: x, y must be > 0");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("limit_S: eta outside (0, 1]");
  return std::exp((std::log(x) + std::log(y)) / (2.0 * eta));
}

PartialIndex partial_index(const AlphaSolution& sol, double theta) {
  if (!(theta >= 0.0)) throw DomainError("partial_index: theta must be >= 0");
  PartialIndex pi;
  pi.solution = sol;
  pi.theta = theta;
  pi.eta = std::pow(sol.q, -0.5 * theta);
  pi.eta_literal = std::pow(sol.q, -theta);
  pi.gamma.reserve(sol.mu.size());
  pi.gamma_literal.reserve(sol.mu.size());
  const double af = std::pow(sol.alpha, theta - 2.0);
  const double qf = std::pow(sol.q, theta - 1.0);
  for (double m : sol.mu) {
    pi.gamma.push_back(m * af);
    pi.gamma_literal.push_back(m * qf);
  }
  return pi;
}

double log_gaussian_expansion(double rho, double u) {
  if (!(rho > -1.0 + 1e-6 && rho < 1.0 - 1e-6))
    throw DomainError("gaussian_expansion: rho outside (-1, 1)");
  if (!(u > 2.718281828459045))
    throw DomainError("gaussian_expansion: u must exceed e");
  const double lu = std::log(u);
  const double frac = rho / (1.0 + rho);
  return 1.5 * (std::log1p(-rho) + std::log1p(rho)) - 2.0 * std::log1p(-rho) -
         frac * (std::log(4.0 * M_PI) + std::log(lu)) - 2.0 / (1.0 + rho) * lu;
}

double gaussian_expansion(double rho, double u) {
  return std::exp(log_gaussian_expansion(rho, u));
}

double log_kotz_marginal_tail(const RadialLaw& kotz, double u) {
  if (kotz.family() != RadialFamily::KotzTypeIII)
    throw DomainError("kotz_marginal_tail: needs a Kotz radial law");
  const double K = kotz.kotz_K(), N = kotz.kotz_N(), r = kotz.kotz_r(), th = kotz.kotz_theta();
  return std::log(K) - 0.5 * (kLog2Pi + std::log(r * th)) +
         (N - 0.5 * th) * std::log(u) - r * std::pow(u, th);
}

double kotz_b_of_u(const RadialLaw& kotz, double u) {
  if (kotz.family() != RadialFamily::KotzTypeIII)
    throw DomainError("kotz_b_of_u: needs a Kotz radial law");
  if (!(u >= 100.0)) throw DomainError("kotz_b_of_u: u must be >= 100");
  const double K = kotz.kotz_K(), N = kotz.kotz_N(), r = kotz.kotz_r(), th = kotz.kotz_theta();
  const double lu = std::log(u);
  const double lead = std::pow(lu / r, 1.0 / th);
  const double corr = ((N - 0.5 * th) * std::log(lu / r) / th + std::log(K) -
                       0.5 * (kLog2Pi + std::log(r * th))) / (th * lu);
  return lead * (1.0 + corr);
}

StildeExpansion stilde_expansion(const EllipticalModel& model, double u) {
  if (model.dim() != 2) throw DomainError("stilde_expansion: bivariate models only");
  if (!(u >= 100.0)) throw DomainError("stilde_expansion: u must be >= 100");
  const double rho = model.sigma.rho(0, 1);
  const double alpha = std::sqrt(2.0 / (1.0 + rho));

  const double b = marginal_quantile(model, 1.0 - 1.0 / u);
  const double bstar = alpha * b;
  const double w = model.radial.scaling_w(bstar);

  StildeExpansion out;
  // prefactor alpha^2 (1-rho^2)^{3/2} / (2 pi (1-rho)^2)
  out.log_general = 2.0 * std::log(alpha) + 1.5 * (std::log1p(-rho) + std::log1p(rho)) -
                    kLog2Pi - 2.0 * std::log1p(-rho) +
                    model.radial.log_survival(bstar) - std::log(bstar) - std::log(w);

  if (model.radial.family() == RadialFamily::KotzTypeIII) {
    const RadialLaw& law = model.radial;
    const double K = law.kotz_K(), N = law.kotz_N(), r = law.kotz_r(), th = law.kotz_theta();
    const double lambda = std::pow(alpha, th);
    const double llu = std::log(std::log(u));
    out.log_kotz_closed =
        (N - th + 2.0) * std::log(alpha) + 1.5 * (std::log1p(-rho) + std::log1p(rho)) +
        (lambda - 1.0) * N / th * std::log(r) - std::log(K) - 2.0 * std::log1p(-rho) +
        (1.0 - 0.5 * lambda) * (2.0 * std::log(K) - std::log(2.0 * M_PI * th)) +
        ((1.0 - lambda) * N / th + 0.5 * lambda - 1.0) * llu - lambda * std::log(u);
  }
  return out;
}

}  // namespace taildep
