// Constrained quadratic program: minimize y^T Sigma_II^{-1} y subject to
// y_i >= 1. The minimizer is characterized by a unique active subset K of I
// with Sigma_KK^{-1} 1_K componentwise positive and
// Sigma_MK Sigma_KK^{-1} 1_K >= 1_M on the complement M = I \ K; the minimum
// is q = 1_K^T Sigma_KK^{-1} 1_K. Index sets are 0-based here.

#ifndef TAILDEP_ALPHA_QP_HPP
#define TAILDEP_ALPHA_QP_HPP

#include <vector>

#include "taildep/model_core.hpp"

namespace taildep {

struct AlphaSolution {
  std::vector<int> index_set;   // I, sorted
  std::vector<int> active_set;  // K subset of I, sorted
  std::vector<int> inactive;    // M = I \ K, sorted
  std::vector<double> minimizer;  // y* aligned with index_set
  double q = 0.0;      // minimum value 1_K^T Sigma_KK^{-1} 1_K
  double alpha = 0.0;  // sqrt(q)
  std::vector<double> mu;  // e_j^T Sigma_KK^{-1} 1_K, aligned with active_set
};

// Exhaustive subset certification for |I| <= 12, iterative active-set method
// for 12 < |I| <= 20. Both paths are exposed for cross-checking.
AlphaSolution solve_alpha(const CorrelationMatrix& sigma, const std::vector<int>& I);
AlphaSolution solve_alpha_enumerate(const CorrelationMatrix& sigma, const std::vector<int>& I);
AlphaSolution solve_alpha_active_set(const CorrelationMatrix& sigma, const std::vector<int>& I);

// Closed-form trivariate solution; equals solve_alpha on the implied matrix.
AlphaSolution trivariate_alpha(double rho12, double rho13, double rho23);

// Condition deciding the trivariate branch: full active set iff positive.
inline double trivariate_condition(double rho12, double rho13, double rho23) {
  const double rho_min = std::min(rho12, std::min(rho13, rho23));
  return 1.0 + 2.0 * rho_min - rho12 - rho13 - rho23;
}

// Independent oracle: exact minimum over the lattice {1, 1+step, ..., 4}^|I|
// followed by projected coordinate-descent polish. |I| <= 4.
double brute_force_alpha(const CorrelationMatrix& sigma, const std::vector<int>& I,
                         double grid_step);

// Max KKT residual of a solution: negativity of mu, violation of y* >= 1,
// |q - y*^T Sigma_II^{-1} y*|, and the gradient on inactive coordinates.
double kkt_check(const CorrelationMatrix& sigma, const std::vector<int>& I,
                 const AlphaSolution& sol);

}  // namespace taildep

#endif  // TAILDEP_ALPHA_QP_HPP
