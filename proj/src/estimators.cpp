#include "taildep/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "taildep/errors.hpp"
#include "taildep/tail_theory.hpp"

namespace taildep {

namespace {

// Strict inversions of a sequence by merge sort.
long long count_inversions(std::vector<double>& v, std::vector<double>& buf,
                           std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  long long inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += static_cast<long long>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return inv;
}

long long tie_pairs(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  long long t = 0;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const long long g = static_cast<long long>(j - i);
    t += g * (g - 1) / 2;
    i = j;
  }
  return t;
}

// Sorted positive part of a sample; throws when the tail is unusable.
std::vector<double> positive_sorted(std::span<const double> x, int k_n) {
  std::vector<double> pos;
  pos.reserve(x.size());
  for (double v : x)
    if (v > 0.0) pos.push_back(v);
  const int n = static_cast<int>(pos.size());
  if (n < 4 || k_n < 2 || k_n > n / 2)
    throw InsufficientTail("tail estimator: need 2 <= k_n <= n_pos/2");
  std::sort(pos.begin(), pos.end());
  return pos;
}

}  // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("kendall_tau: need matching n >= 2");
  const bool x_const = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
  const bool y_const = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
  if (x_const || y_const) throw DegenerateSample("kendall_tau: constant column");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];

  // Pairs tied in x, in y, and in both.
  long long txy = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j < n && x[order[j]] == x[order[i]] && ys[j] == ys[i]) ++j;
      const long long g = static_cast<long long>(j - i);
      txy += g * (g - 1) / 2;
      i = j;
    }
  }
  long long tx = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j < n && x[order[j]] == x[order[i]]) ++j;
      const long long g = static_cast<long long>(j - i);
      tx += g * (g - 1) / 2;
      i = j;
    }
  }
  const long long ty = tie_pairs(ys);

  std::vector<double> buf(n);
  const long long discordant = count_inversions(ys, buf, 0, n);
  const long long total = static_cast<long long>(n) * (n - 1) / 2;
  const long long comparable = total - tx - ty + txy;  // concordant + discordant
  return static_cast<double>(comparable - 2 * discordant) / static_cast<double>(total);
}

double rho_from_tau(double tau) {
  if (!(tau >= -1.0 && tau <= 1.0)) throw DomainError("rho_from_tau: tau outside [-1, 1]");
  const double rho = std::sin(1.5707963267948966 * tau);
  return std::clamp(rho, -1.0 + 1e-9, 1.0 - 1e-9);
}

int default_kn(int n_effective) {
  const int kn = static_cast<int>(std::floor(std::pow(static_cast<double>(n_effective), 0.4)));
  return std::max(2, kn);
}

double theta_hat(std::span<const double> x, int k_n) {
  const std::vector<double> pos = positive_sorted(x, k_n);
  const int n = static_cast<int>(pos.size());
  const double base_log_x = std::log(pos[n - k_n - 1]);      // X_{n-k:n}
  const double base_loglog = std::log(std::log(static_cast<double>(n) / k_n));
  double d = 0.0, t = 0.0;
  for (int i = 1; i <= k_n; ++i) {
    d += std::log(pos[n - i]) - base_log_x;
    const int ip = std::max(i, 2);  // guards ln ln(n/1)
    t += std::log(std::log(static_cast<double>(n) / ip)) - base_loglog;
  }
  if (!(d > 0.0)) throw DegenerateSample("theta_hat: zero log-spacing in the tail");
  // d/t estimates the exponent of the quantile in ln u; its reciprocal is the
  // Weibull tail-coefficient in the 1-F = exp(-x^theta L) convention.
  return t / d;
}

CHat c_hat(std::span<const double> x, int k_n, double theta) {
  if (!(theta > 0.0)) throw DomainError("c_hat: theta must be > 0");
  const std::vector<double> pos = positive_sorted(x, k_n);
  const int n = static_cast<int>(pos.size());
  CHat out;
  for (int i = 1; i <= k_n; ++i) {
    const double num = std::log(static_cast<double>(n) / i);
    const double xi = pos[n - i];
    out.literal += num / xi;
    out.corrected += num / std::pow(xi, theta);
  }
  out.literal /= k_n;
  out.corrected /= k_n;
  return out;
}

double eta_hat_bivariate(double rho_hat, double theta_hat_) {
  return bivariate_index(rho_hat, theta_hat_).eta;
}

PartialEstimate eta_hat_partial(const SampleMatrix& data, const std::vector<int>& I, int k_n) {
  const int m = static_cast<int>(I.size());
  if (m < 1 || m > data.k) throw DomainError("eta_hat_partial: bad index set");
  for (int idx : I)
    if (idx < 0 || idx >= data.k) throw DomainError("eta_hat_partial: index out of range");
  if (data.n < 100) throw DomainError("eta_hat_partial: need n >= 100");

  std::vector<std::vector<double>> cols(m);
  for (int j = 0; j < m; ++j) cols[j] = data.column(I[j]);

  // Pairwise estimates, clamped into the band validate_correlation accepts;
  // a clamp counts as a repair since the estimate was altered.
  PartialEstimate out;
  Matrix sigma_hat = Matrix::identity(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j) {
      const double rho = rho_from_tau(kendall_tau(cols[i], cols[j]));
      const double band = std::nextafter(1.0 - 1e-6, 0.0);
      const double clamped = std::clamp(rho, -band, band);
      if (clamped != rho) out.pd_repaired = true;
      sigma_hat(i, j) = clamped;
      sigma_hat(j, i) = clamped;
    }

  // PD repair: clip eigenvalues at 1e-8, rescale to unit diagonal.
  auto chol = cholesky_lower(sigma_hat, 1e-12);
  if (!chol) {
    std::vector<double> ev;
    Matrix V;
    jacobi_eigen(sigma_hat, ev, V);
    for (double& l : ev) l = std::max(l, 1e-8);
    Matrix D(m, m);
    for (int i = 0; i < m; ++i) D(i, i) = ev[i];
    Matrix rep = matmul(matmul(V, D), transpose(V));
    for (int i = 0; i < m; ++i) {
      const double si = 1.0 / std::sqrt(rep(i, i));
      for (int j = 0; j < m; ++j) rep(i, j) *= si;
      for (int j = 0; j < m; ++j) rep(j, i) *= si;
    }
    for (int i = 0; i < m; ++i) {
      rep(i, i) = 1.0;
      for (int j = 0; j < i; ++j) {
        const double band = std::nextafter(1.0 - 1e-6, 0.0);
        const double v = std::clamp(rep(i, j), -band, band);
        rep(i, j) = v;
        rep(j, i) = v;
      }
    }
    sigma_hat = rep;
    out.pd_repaired = true;
  }
  out.sigma_hat = sigma_hat;

  const CorrelationMatrix sigma = CorrelationMatrix::validate(sigma_hat);
  std::vector<int> full(m);
  std::iota(full.begin(), full.end(), 0);
  out.solution = solve_alpha(sigma, full);
  out.q = out.solution.q;

  if (k_n <= 0) {
    int n_pos = 0;
    for (double v : cols[0])
      if (v > 0.0) ++n_pos;
    k_n = default_kn(n_pos);
  }
  out.k_n = k_n;
  out.theta = theta_hat(cols[0], k_n);
  out.eta = std::pow(out.q, -0.5 * out.theta);
  out.eta_literal = std::pow(out.q, -out.theta);

  if (m == 3) {
    const double r12 = sigma_hat(0, 1), r13 = sigma_hat(0, 2), r23 = sigma_hat(1, 2);
    const AlphaSolution tri = trivariate_alpha(r12, r13, r23);
    out.trivariate_branch = trivariate_condition(r12, r13, r23) > 0.0 ? 'A' : 'B';
    out.trivariate_q = tri.q;
  }
  return out;
}

EmpiricalS empirical_s(const SampleMatrix& data, const std::vector<int>& I,
                       const std::vector<double>& x, double u) {
  if (I.empty() || x.size() != I.size()) throw DomainError("empirical_s: bad arguments");
  if (!(u > 0.0) || u > data.n / 10.0)
    throw DomainError("empirical_s: need 0 < u <= n/10");
  const int n = data.n;
  // Normalized ranks r/(n+1) per requested column.
  std::vector<std::vector<double>> rank(I.size(), std::vector<double>(n));
  for (std::size_t j = 0; j < I.size(); ++j) {
    const std::vector<double> col = data.column(I[j]);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return col[a] < col[b]; });
    for (int pos = 0; pos < n; ++pos)
      rank[j][order[pos]] = static_cast<double>(pos + 1) / (n + 1);
  }
  EmpiricalS out;
  for (int i = 0; i < n; ++i) {
    bool all = true;
    for (std::size_t j = 0; j < I.size(); ++j) {
      if (!(rank[j][i] > 1.0 - x[j] / u)) { all = false; break; }
    }
    if (all) ++out.count;
  }
  out.value = static_cast<double>(out.count) / n;
  return out;
}

}  // namespace taildep
