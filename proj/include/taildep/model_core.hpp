// Radial laws, correlation matrices and the elliptical model container.
//
// A RadialLaw is the distribution of the positive radius R in X = R A^T U.
// Each shipped family stores an exact survival function (not just the
// asymptote), so tail expansions can be checked against it without unknown
// nuisance terms. All probability arithmetic is in log scale.

#ifndef TAILDEP_MODEL_CORE_HPP
#define TAILDEP_MODEL_CORE_HPP

#include <optional>
#include <string>
#include <vector>

#include "taildep/linalg.hpp"

namespace taildep {

enum class RadialFamily { GaussianChi, UnitGumbel, KotzTypeIII, Lognormal, ExpScaling };

class RadialLaw {
 public:
  // R^2 chi-square with `dim` degrees of freedom; components of the
  // dim-dimensional elliptical vector are then standard Gaussian.
  static RadialLaw gaussian_chi(int dim);

  // R = max(G, 0) with G unit Gumbel; the negative part collapses to an atom
  // at zero of mass exp(-1).
  static RadialLaw unit_gumbel();

  // Survival K u^N exp(-r u^theta) made exact: it applies for u >= u0 where
  // u0 = max(root of K u^N exp(-r u^theta) = 1 on the decreasing branch,
  // (max(N,0)/(r theta))^{1/theta}), and equals 1 below u0.
  static RadialLaw kotz(double K, double N, double r, double theta);

  // R = exp(mu + sigma Z); the theta = 0 case with eta = 1.
  static RadialLaw lognormal(double mu, double sigma);

  // Hazard f/(1-F) = exp(a u) by construction: survival exp(-(e^{au}-1)/a).
  static RadialLaw exp_scaling(double a);

  RadialFamily family() const { return family_; }
  double support_lower() const { return u0_; }

  // ln P{R > u}; zero for u <= u0 (Kotz) and at the left endpoint generally.
  double log_survival(double u) const;

  // Inverse of F at p in (0,1), by bracketing + Brent to 1e-12 relative.
  double quantile(double p) const;

  // u with log_survival(u) = target (target < 0); the deep-tail-safe form of
  // the quantile that never routes the survival through linear scale.
  double quantile_log_survival(double target) const;

  double median() const { return quantile(0.5); }

  // Scaling function w(u) = (1-F(u)) / int_u^inf (1-F(s)) ds. Closed form for
  // Kotz (r theta u^{theta-1}) and ExpScaling (e^{au}); quadrature otherwise.
  // The quadrature path stays public as a cross-check oracle.
  double scaling_w(double u) const;
  double scaling_w_quadrature(double u) const;

  // Weibull tail-coefficient of the family; nullopt for ExpScaling, whose
  // scaling function is not regularly varying.
  std::optional<double> weibull_theta() const;

  // Kotz parameters (only meaningful for the Kotz family).
  double kotz_K() const { return p1_; }
  double kotz_N() const { return p2_; }
  double kotz_r() const { return p3_; }
  double kotz_theta() const { return p4_; }

  std::string describe() const;

 private:
  RadialLaw(RadialFamily f, double p1, double p2, double p3, double p4);

  RadialFamily family_;
  double p1_ = 0.0, p2_ = 0.0, p3_ = 0.0, p4_ = 0.0;
  double u0_ = 0.0;
};

class CorrelationMatrix {
 public:
  // Validates and normalizes a raw k x k array: symmetrizes from the lower
  // triangle, requires exact-unit diagonal (1e-12), off-diagonals strictly
  // inside (-1, 1) by 1e-6, and a Cholesky factorization with pivots > 1e-12.
  static CorrelationMatrix validate(const Matrix& raw);

  int dim() const { return sigma_.rows(); }
  const Matrix& sigma() const { return sigma_; }
  const Matrix& chol() const { return chol_; }  // lower L with L L^T = sigma
  double rho(int i, int j) const { return sigma_(i, j); }

 private:
  CorrelationMatrix(Matrix sigma, Matrix chol)
      : sigma_(std::move(sigma)), chol_(std::move(chol)) {}
  Matrix sigma_;
  Matrix chol_;
};

struct EllipticalModel {
  EllipticalModel(CorrelationMatrix sigma_in, RadialLaw radial_in)
      : sigma(std::move(sigma_in)), radial(std::move(radial_in)) {}
  CorrelationMatrix sigma;
  RadialLaw radial;
  int dim() const { return sigma.dim(); }
};

// Empirical Gumbel max-domain check: the excess ratio
// [1-F(u + x/w(u))]/[1-F(u)] against its limit e^{-x}.
struct MdaRow {
  double u = 0.0;
  double x = 0.0;
  double ratio = 0.0;
  double deviation = 0.0;  // ratio - exp(-x)
};
std::vector<MdaRow> mda_diagnostic(const RadialLaw& law,
                                   const std::vector<double>& u_grid,
                                   const std::vector<double>& x_grid);

}  // namespace taildep

#endif  // TAILDEP_MODEL_CORE_HPP
