#include "taildep/alpha_qp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "taildep/errors.hpp"

namespace taildep {

namespace {

constexpr double kCertTol = 1e-10;

void check_index_set(const CorrelationMatrix& sigma, const std::vector<int>& I) {
  if (I.empty()) throw DomainError("solve_alpha: empty index set");
  if (static_cast<int>(I.size()) > 20) throw DomainError("solve_alpha: |I| > 20 unsupported");
  for (std::size_t i = 0; i < I.size(); ++i) {
    if (I[i] < 0 || I[i] >= sigma.dim()) throw DomainError("solve_alpha: index out of range");
    if (i > 0 && I[i] <= I[i - 1]) throw DomainError("solve_alpha: index set must be sorted, unique");
  }
}

// Assemble the solution for a given active subset (positions into I).
// Returns false when certification fails at tolerance.
bool certify(const Matrix& sigma_II, const std::vector<int>& kpos,
             std::vector<double>& mu, std::vector<double>& y_inactive, double& q) {
  const int m = sigma_II.rows();
  std::vector<int> mpos;
  for (int i = 0; i < m; ++i)
    if (!std::binary_search(kpos.begin(), kpos.end(), i)) mpos.push_back(i);

  const Matrix skk = sigma_II.submatrix(kpos, kpos);
  const auto L = cholesky_lower(skk, 1e-14);
  if (!L) return false;
  mu = cholesky_solve(*L, std::vector<double>(kpos.size(), 1.0));
  for (double v : mu)
    if (v < -kCertTol) return false;

  y_inactive.assign(mpos.size(), 0.0);
  if (!mpos.empty()) {
    const Matrix smk = sigma_II.submatrix(mpos, kpos);
    for (std::size_t i = 0; i < mpos.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < kpos.size(); ++j)
        s += smk(static_cast<int>(i), static_cast<int>(j)) * mu[j];
      if (s < 1.0 - kCertTol) return false;
      y_inactive[i] = s;
    }
  }
  q = std::accumulate(mu.begin(), mu.end(), 0.0);
  return true;
}

AlphaSolution assemble(const std::vector<int>& I, const std::vector<int>& kpos,
                       const std::vector<double>& mu, const std::vector<double>& y_inactive,
                       double q) {
  AlphaSolution sol;
  sol.index_set = I;
  sol.q = q;
  sol.alpha = std::sqrt(q);
  sol.mu = mu;
  sol.minimizer.assign(I.size(), 1.0);
  std::size_t mi = 0;
  for (std::size_t i = 0; i < I.size(); ++i) {
    if (std::binary_search(kpos.begin(), kpos.end(), static_cast<int>(i))) {
      sol.active_set.push_back(I[i]);
    } else {
      sol.inactive.push_back(I[i]);
      sol.minimizer[i] = y_inactive[mi++];
    }
  }
  return sol;
}

}  // namespace

AlphaSolution solve_alpha_enumerate(const CorrelationMatrix& sigma, const std::vector<int>& I) {
  check_index_set(sigma, I);
  const int m = static_cast<int>(I.size());
  if (m > 12) throw DomainError("solve_alpha_enumerate: |I| > 12");
  const Matrix sigma_II = sigma.sigma().submatrix(I, I);

  bool found = false;
  double best_q = 0.0;
  std::vector<int> best_k;
  std::vector<double> best_mu, best_y;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> kpos;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) kpos.push_back(i);
    std::vector<double> mu, yM;
    double q;
    if (!certify(sigma_II, kpos, mu, yM, q)) continue;
    // Tie-break under exact degeneracy: smaller q, then lexicographically
    // smallest K.
    if (!found || q < best_q - 1e-14 ||
        (std::fabs(q - best_q) <= 1e-14 && kpos < best_k)) {
      found = true;
      best_q = q;
      best_k = kpos;
      best_mu = mu;
      best_y = yM;
    }
  }
  if (!found)
    throw NoCertifiedSubset("solve_alpha: no subset certified (near-singular Sigma_II?)");
  return assemble(I, best_k, best_mu, best_y, best_q);
}

AlphaSolution solve_alpha_active_set(const CorrelationMatrix& sigma, const std::vector<int>& I) {
  check_index_set(sigma, I);
  const int m = static_cast<int>(I.size());
  const Matrix sigma_II = sigma.sigma().submatrix(I, I);

  std::vector<int> kpos(m);
  std::iota(kpos.begin(), kpos.end(), 0);
  std::vector<double> mu, yM;
  double q = 0.0;
  for (int iter = 0; iter < 8 * m + 16; ++iter) {
    std::vector<int> mpos;
    for (int i = 0; i < m; ++i)
      if (!std::binary_search(kpos.begin(), kpos.end(), i)) mpos.push_back(i);
    const Matrix skk = sigma_II.submatrix(kpos, kpos);
    const auto L = cholesky_lower(skk, 1e-14);
    if (!L) throw NoCertifiedSubset("solve_alpha: singular active block");
    mu = cholesky_solve(*L, std::vector<double>(kpos.size(), 1.0));

    // Drop the most negative multiplier first.
    int drop = -1;
    double worst = -kCertTol;
    for (std::size_t j = 0; j < mu.size(); ++j)
      if (mu[j] < worst) { worst = mu[j]; drop = static_cast<int>(j); }
    if (drop >= 0) {
      if (kpos.size() == 1)
        throw NoCertifiedSubset("solve_alpha: active set collapsed");
      kpos.erase(kpos.begin() + drop);
      continue;
    }

    // Then add the most violated inactive constraint.
    yM.assign(mpos.size(), 0.0);
    int add = -1;
    double viol = 1.0 - kCertTol;
    for (std::size_t i = 0; i < mpos.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < kpos.size(); ++j) s += sigma_II(mpos[i], kpos[j]) * mu[j];
      yM[i] = s;
      if (s < viol) { viol = s; add = mpos[i]; }
    }
    if (add >= 0) {
      kpos.insert(std::lower_bound(kpos.begin(), kpos.end(), add), add);
      continue;
    }
    q = std::accumulate(mu.begin(), mu.end(), 0.0);
    return assemble(I, kpos, mu, yM, q);
  }
  throw NoCertifiedSubset("solve_alpha: active-set iteration did not settle");
}

AlphaSolution solve_alpha(const CorrelationMatrix& sigma, const std::vector<int>& I) {
  if (static_cast<int>(I.size()) <= 12) return solve_alpha_enumerate(sigma, I);
  return solve_alpha_active_set(sigma, I);
}

AlphaSolution trivariate_alpha(double rho12, double rho13, double rho23) {
  Matrix raw = Matrix::identity(3);
  raw(1, 0) = rho12;
  raw(2, 0) = rho13;
  raw(2, 1) = rho23;
  const CorrelationMatrix sigma = CorrelationMatrix::validate(raw);

  const double cond = trivariate_condition(rho12, rho13, rho23);
  AlphaSolution sol;
  sol.index_set = {0, 1, 2};
  if (cond > 0.0) {
    // Rational expression in long double: the denominator is det(Sigma) and
    // loses digits as the matrix approaches singularity.
    const long double a = rho12, b = rho13, c = rho23;
    const long double num = 3.0L - 2.0L * (a + b + c) - a * a - b * b - c * c +
                            2.0L * (a * b + a * c + b * c);
    const long double den = 1.0L + 2.0L * a * b * c - a * a - b * b - c * c;
    sol.active_set = {0, 1, 2};
    sol.minimizer = {1.0, 1.0, 1.0};
    sol.q = static_cast<double>(num / den);
    sol.alpha = std::sqrt(sol.q);
    sol.mu = cholesky_solve(sigma.chol(), {1.0, 1.0, 1.0});
    return sol;
  }
  // The minimal pair is unique when the condition fails.
  const double rhos[3] = {rho12, rho13, rho23};
  const int pair_idx[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  int best = 0;
  for (int t = 1; t < 3; ++t)
    if (rhos[t] < rhos[best]) best = t;
  const int i = pair_idx[best][0], j = pair_idx[best][1];
  const int other = 3 - i - j;
  const double rho_ij = rhos[best];
  sol.active_set = {i, j};
  sol.inactive = {other};
  sol.q = 2.0 / (1.0 + rho_ij);
  sol.alpha = std::sqrt(sol.q);
  sol.mu = {1.0 / (1.0 + rho_ij), 1.0 / (1.0 + rho_ij)};
  sol.minimizer = {1.0, 1.0, 1.0};
  sol.minimizer[other] =
      (sigma.rho(other, i) + sigma.rho(other, j)) / (1.0 + rho_ij);
  return sol;
}

double brute_force_alpha(const CorrelationMatrix& sigma, const std::vector<int>& I,
                         double grid_step) {
  check_index_set(sigma, I);
  const int m = static_cast<int>(I.size());
  if (m > 4) throw DomainError("brute_force_alpha: |I| <= 4");
  if (!(grid_step > 0.0 && grid_step <= 0.1))
    throw DomainError("brute_force_alpha: grid_step outside (0, 0.1]");

  const Matrix sigma_II = sigma.sigma().submatrix(I, I);
  const auto L = cholesky_lower(sigma_II, 1e-14);
  if (!L) throw NotPositiveDefinite("brute_force_alpha: Sigma_II not positive definite");
  // Dense inverse B = Sigma_II^{-1}.
  Matrix B(m, m);
  for (int j = 0; j < m; ++j) {
    std::vector<double> e(m, 0.0);
    e[j] = 1.0;
    const auto col = cholesky_solve(*L, e);
    for (int i = 0; i < m; ++i) B(i, j) = col[i];
  }
  const auto quad = [&](const std::vector<double>& y) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s += y[i] * B(i, j) * y[j];
    return s;
  };

  const int npts = static_cast<int>(std::floor(3.0 / grid_step + 0.5)) + 1;
  std::vector<double> y(m, 1.0), best_y(m, 1.0);
  double best = quad(y);

  // Scan all lattice combinations of coordinates 1..m-1; along coordinate 0
  // the parabola's lattice minimum sits at the clamped floor/ceil of the
  // continuous argmin, so only two candidates need evaluation.
  std::vector<int> idx(std::max(m - 1, 0), 0);
  bool done = false;
  while (!done) {
    for (int d = 1; d < m; ++d) y[d] = 1.0 + idx[d - 1] * grid_step;
    double cross = 0.0;
    for (int d = 1; d < m; ++d) cross += B(0, d) * y[d];
    const double cont = -cross / B(0, 0);
    const double lo_i = std::floor((cont - 1.0) / grid_step);
    for (double cand : {lo_i, lo_i + 1.0}) {
      const double yc = 1.0 + std::clamp(cand, 0.0, static_cast<double>(npts - 1)) * grid_step;
      y[0] = yc;
      const double v = quad(y);
      if (v < best) { best = v; best_y = y; }
    }
    if (m == 1) break;
    int d = 0;
    while (d < m - 1 && ++idx[d] == npts) { idx[d] = 0; ++d; }
    done = d == m - 1;
  }

  // Projected coordinate descent from the best lattice point.
  y = best_y;
  for (int sweep = 0; sweep < 5000; ++sweep) {
    double moved = 0.0;
    for (int d = 0; d < m; ++d) {
      double cross = 0.0;
      for (int j = 0; j < m; ++j)
        if (j != d) cross += B(d, j) * y[j];
      const double cand = std::max(1.0, -cross / B(d, d));
      moved = std::max(moved, std::fabs(cand - y[d]));
      y[d] = cand;
    }
    if (moved < 1e-14) break;
  }
  return std::min(best, quad(y));
}

double kkt_check(const CorrelationMatrix& sigma, const std::vector<int>& I,
                 const AlphaSolution& sol) {
  const int m = static_cast<int>(I.size());
  const Matrix sigma_II = sigma.sigma().submatrix(I, I);
  const auto L = cholesky_lower(sigma_II, 1e-14);
  if (!L) throw NotPositiveDefinite("kkt_check: Sigma_II not positive definite");

  double resid = 0.0;
  for (double v : sol.mu) resid = std::max(resid, -v);
  for (double v : sol.minimizer) resid = std::max(resid, 1.0 - v);

  const std::vector<double> grad = cholesky_solve(*L, sol.minimizer);  // Sigma_II^{-1} y*
  double q_direct = 0.0;
  for (int i = 0; i < m; ++i) q_direct += sol.minimizer[i] * grad[i];
  resid = std::max(resid, std::fabs(sol.q - q_direct));

  for (int i = 0; i < m; ++i) {
    const bool inactive = std::binary_search(sol.inactive.begin(), sol.inactive.end(), I[i]);
    if (inactive) resid = std::max(resid, std::fabs(grad[i]));
  }
  return resid;
}

}  // namespace taildep
