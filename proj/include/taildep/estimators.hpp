// Rank and tail estimators: Kendall's tau (merge-sort counting),
// rho = sin(pi tau / 2), the Weibull tail-coefficient theta from upper
// order-statistic log-spacings, the scale constant c, and the plug-in
// partial residual dependence index via the quadratic program.

#ifndef TAILDEP_ESTIMATORS_HPP
#define TAILDEP_ESTIMATORS_HPP

#include <optional>
#include <span>

#include "taildep/alpha_qp.hpp"
#include "taildep/sampling.hpp"

namespace taildep {

// tau = (concordant - discordant) / (n(n-1)/2); ties count as neither.
// O(n log n) via inversion counting.
double kendall_tau(std::span<const double> x, std::span<const double> y);

// rho = sin(pi tau / 2), clamped into (-1 + 1e-9, 1 - 1e-9).
double rho_from_tau(double tau);

// Default number of upper order statistics: floor(n^{0.4}).
int default_kn(int n_effective);

// Weibull tail-coefficient estimate from the positive part of the sample
// (marginals are symmetric about zero, so about half the observations
// survive the cut). Ratio of mean log-spacings to mean log-log spacings,
// returned in the convention where the quantile grows like (ln u)^{1/theta}.
double theta_hat(std::span<const double> x, int k_n);

struct CHat {
  double literal = 0.0;    // mean of ln(n/i) / X_{n-i+1:n}
  double corrected = 0.0;  // mean of ln(n/i) / X_{n-i+1:n}^theta
};
CHat c_hat(std::span<const double> x, int k_n, double theta);

// ((1 + rho_hat)/2)^{theta_hat/2}.
double eta_hat_bivariate(double rho_hat, double theta_hat);

struct PartialEstimate {
  AlphaSolution solution;   // QP solution on the estimated correlation block
  Matrix sigma_hat;         // estimated (repaired) correlation block over I
  double theta = 0.0;       // theta_hat from the first coordinate in I
  int k_n = 0;
  double q = 0.0;           // QP minimum on sigma_hat
  double eta = 0.0;         // q^{-theta/2}
  double eta_literal = 0.0; // q^{-theta}
  bool pd_repaired = false;
  // For |I| = 3: which closed-form branch fired ('A' full set, 'B' pair) and
  // the closed-form minimum for cross-checking.
  std::optional<char> trivariate_branch;
  std::optional<double> trivariate_q;
};

PartialEstimate eta_hat_partial(const SampleMatrix& data, const std::vector<int>& I, int k_n);

// Rank-based plug-in for S~_{u,I}(x): fraction of rows whose normalized ranks
// r/(n+1) exceed 1 - x_j/u on every coordinate of I.
struct EmpiricalS {
  double value = 0.0;
  long count = 0;
};
EmpiricalS empirical_s(const SampleMatrix& data, const std::vector<int>& I,
                       const std::vector<double>& x, double u);

}  // namespace taildep

#endif  // TAILDEP_ESTIMATORS_HPP
