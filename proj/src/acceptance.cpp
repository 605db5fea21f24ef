#include "taildep/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "taildep/alpha_qp.hpp"
#include "taildep/errors.hpp"
#include "taildep/estimators.hpp"
#include "taildep/sampling.hpp"
#include "taildep/survival_oracle.hpp"
#include "taildep/tail_theory.hpp"

namespace taildep::accept {

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << "FAILED " << what;
    }
  }
  void note(const std::string& s) {
    if (detail.tellp() > 0) detail << "; ";
    detail << s;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

EllipticalModel bivariate(double rho, RadialLaw law) {
  Matrix m = Matrix::identity(2);
  m(1, 0) = rho;
  return EllipticalModel(CorrelationMatrix::validate(m), std::move(law));
}

EllipticalModel equicorrelated3(double rho, RadialLaw law) {
  Matrix m = Matrix::identity(3);
  m(1, 0) = m(2, 0) = m(2, 1) = rho;
  return EllipticalModel(CorrelationMatrix::validate(m), std::move(law));
}

// Seeded random correlation matrix, kept comfortably inside the PD cone.
Matrix random_correlation(int k, CounterRng& rng) {
  for (;;) {
    Matrix a(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        double s = 0.0;
        for (int t = 0; t < 12; ++t) s += rng.next_uniform();
        a(i, j) = s - 6.0;
      }
    Matrix g = matmul(a, transpose(a));
    Matrix c = Matrix::identity(k);
    bool ok = true;
    for (int i = 0; i < k && ok; ++i)
      for (int j = 0; j < i && ok; ++j) {
        const double d = std::sqrt(g(i, i) * g(j, j));
        const double rho = g(i, j) / d;
        if (!(std::fabs(rho) < 1.0 - 1e-4)) ok = false;
        c(i, j) = rho;
        c(j, i) = rho;
      }
    if (ok && cholesky_lower(c, 0.05)) return c;
  }
}

// Number of subsets certified by the KKT conditions; degenerate when any
// margin falls inside the +-band.
int certified_subsets(const CorrelationMatrix& sigma, const std::vector<int>& I,
                      double band, bool& degenerate) {
  const int m = static_cast<int>(I.size());
  const Matrix sub = sigma.sigma().submatrix(I, I);
  int count = 0;
  degenerate = false;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> kpos, mpos;
    for (int i = 0; i < m; ++i)
      (mask & (1u << i) ? kpos : mpos).push_back(i);
    const auto L = cholesky_lower(sub.submatrix(kpos, kpos), 1e-14);
    if (!L) { degenerate = true; continue; }
    const auto mu = cholesky_solve(*L, std::vector<double>(kpos.size(), 1.0));
    double margin = 1e300;
    for (double v : mu) margin = std::min(margin, v);
    for (std::size_t i = 0; i < mpos.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < kpos.size(); ++j) s += sub(mpos[i], kpos[j]) * mu[j];
      margin = std::min(margin, s - 1.0);
    }
    if (std::fabs(margin) < band) degenerate = true;
    if (margin > 0.0) ++count;
  }
  return count;
}

double brute_kendall(const std::vector<double>& x, const std::vector<double>& y) {
  long long num = 0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = (x[i] - x[j]) * (y[i] - y[j]);
      if (d > 0.0) ++num;
      else if (d < 0.0) --num;
    }
  return static_cast<double>(num) / (0.5 * n * (n - 1));
}

CriterionResult c01_qp(Level level) {
  Check ck;
  const auto t0 = Clock::now();
  const int total = level == Level::Full ? 500 : 60;
  CounterRng rng(1001);
  double worst_bf = 0.0, worst_kkt = 0.0;
  int done = 0, redrawn = 0;
  while (done < total) {
    const int k = 2 + static_cast<int>(rng.next_u64() % 5);
    const Matrix raw = random_correlation(k, rng);
    const CorrelationMatrix sigma = CorrelationMatrix::validate(raw);
    const int msize = std::min(k, 2 + static_cast<int>(rng.next_u64() % 2));
    std::vector<int> I(msize);
    std::iota(I.begin(), I.end(), 0);

    bool degenerate = false;
    const int ncert = certified_subsets(sigma, I, 1e-6, degenerate);
    if (degenerate) { ++redrawn; continue; }
    ck.expect(ncert == 1, "unique certified subset (got " + std::to_string(ncert) + ")");

    const AlphaSolution sol = solve_alpha(sigma, I);
    const AlphaSolution it = solve_alpha_active_set(sigma, I);
    ck.expect(sol.active_set == it.active_set, "enumeration/active-set agreement");

    const double bf = brute_force_alpha(sigma, I, 0.01);
    worst_bf = std::max(worst_bf, std::fabs(sol.q - bf));
    const double kkt = kkt_check(sigma, I, sol);
    worst_kkt = std::max(worst_kkt, kkt);
    ++done;
  }
  ck.expect(worst_bf <= 1e-6, "q within 1e-6 of brute force (worst " + fmt(worst_bf) + ")");
  ck.expect(worst_kkt < 1e-8, "KKT residual < 1e-8 (worst " + fmt(worst_kkt) + ")");
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (level == Level::Full) ck.expect(secs < 30.0, "runtime < 30 s");
  ck.note(std::to_string(done) + " matrices, " + std::to_string(redrawn) +
          " degenerate redraws, max|q-bf|=" + fmt(worst_bf) + ", max kkt=" + fmt(worst_kkt));
  return {1, "qp-correctness", ck.pass, ck.detail.str(), secs};
}

CriterionResult c02_lemma(Level level) {
  Check ck;
  const auto t0 = Clock::now();
  const int total = level == Level::Full ? 200 : 60;
  CounterRng rng(2002);
  int branch_a = 0, branch_b = 0;
  double worst = 0.0;
  for (int t = 0; t < total; ++t) {
    const Matrix raw = random_correlation(3, rng);
    const CorrelationMatrix sigma = CorrelationMatrix::validate(raw);
    const AlphaSolution lem = trivariate_alpha(raw(1, 0), raw(2, 0), raw(2, 1));
    const AlphaSolution gen = solve_alpha(sigma, {0, 1, 2});
    worst = std::max(worst, std::fabs(lem.q - gen.q));
    ck.expect(lem.active_set == gen.active_set, "active sets agree");
    (trivariate_condition(raw(1, 0), raw(2, 0), raw(2, 1)) > 0.0 ? branch_a : branch_b)++;
  }
  ck.expect(worst < 1e-10, "closed form within 1e-10 (worst " + fmt(worst) + ")");
  ck.expect(branch_a > 0 && branch_b > 0, "both branches exercised");

  const AlphaSolution pinned = trivariate_alpha(-0.5, 0.3, 0.3);
  ck.expect(pinned.active_set == std::vector<int>{0, 1} && std::fabs(pinned.q - 4.0) <= 1e-10,
            "(-0.5, 0.3, 0.3) gives K={1,2}, q=4");
  ck.note(std::to_string(total) + " matrices, branches " + std::to_string(branch_a) + "/" +
          std::to_string(branch_b) + ", max|dq|=" + fmt(worst));
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {2, "lemma41-equivalence", ck.pass, ck.detail.str(), secs};
}

CriterionResult c03_scaling(Level) {
  Check ck;
  const auto t0 = Clock::now();
  const double xs[] = {0.3, 0.7, 1.0, 2.0, 5.0};
  const double cs[] = {0.25, 0.5, 2.0, 4.0, 10.0};
  const double etas[] = {0.25, 0.5, 0.75, 1.0};
  double worst = 0.0;
  for (double x : xs)
    for (double y : xs)
      for (double c : cs)
        for (double eta : etas) {
          const double lhs = limit_S(c * x, c * y, eta);
          const double rhs = std::pow(c, 1.0 / eta) * limit_S(x, y, eta);
          worst = std::max(worst, std::fabs(lhs / rhs - 1.0));
        }
  ck.expect(worst <= 1e-12, "scaling relation to 1e-12 (worst " + fmt(worst) + ")");
  ck.note("500 grid points, worst rel err " + fmt(worst));
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {3, "scaling-law", ck.pass, ck.detail.str(), secs};
}

CriterionResult c04_rv_index(Level level) {
  Check ck;
  const auto t0 = Clock::now();
  const std::vector<double> grid{1e3, 1e4, 1e5, 1e6, 1e7};
  struct Case {
    std::string name;
    EllipticalModel model;
    double target;
  };
  std::vector<Case> cases;
  const auto gauss_rhos = level == Level::Full ? std::vector<double>{0.0, 0.25, 0.5}
                                               : std::vector<double>{0.0, 0.5};
  for (double rho : gauss_rhos)
    cases.push_back({"gauss rho=" + fmt(rho), bivariate(rho, RadialLaw::gaussian_chi(2)),
                     -2.0 / (1.0 + rho)});
  const auto thetas = level == Level::Full ? std::vector<double>{1.0, 2.0, 3.0}
                                           : std::vector<double>{1.0, 2.0};
  const auto kotz_rhos = level == Level::Full ? std::vector<double>{-0.3, 0.0, 0.5}
                                              : std::vector<double>{0.0, 0.5};
  for (double th : thetas)
    for (double rho : kotz_rhos)
      cases.push_back({"kotz theta=" + fmt(th) + " rho=" + fmt(rho),
                       bivariate(rho, RadialLaw::kotz(1, 0, 1, th)),
                       -std::pow(2.0 / (1.0 + rho), 0.5 * th)});
  double worst_rel = 0.0;
  for (const auto& c : cases) {
    const SlopeFit fit = rv_slope(c.model, {0, 1}, grid);
    const double rel = std::fabs(fit.slope - c.target) / std::fabs(c.target);
    worst_rel = std::max(worst_rel, rel);
    ck.expect(rel <= 0.05, c.name + ": slope " + fmt(fit.slope) + " vs " + fmt(c.target));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (level == Level::Full) ck.expect(secs < 300.0, "runtime < 5 min");
  ck.note(std::to_string(cases.size()) + " models, worst rel dev " + fmt(worst_rel));
  return {4, "rv-index", ck.pass, ck.detail.str(), secs};
}

CriterionResult c05_limit(Level level) {
  Check ck;
  const auto t0 = Clock::now();
  const std::vector<std::pair<double, double>> xy{{0.5, 0.5}, {2.0, 2.0}, {0.5, 2.0}};
  const auto thetas = level == Level::Full ? std::vector<double>{1.0, 2.0}
                                           : std::vector<double>{1.0};
  double worst = 0.0;
  for (double th : thetas) {
    for (double rho : {0.0, 0.5}) {
      const EllipticalModel model =
          bivariate(rho, th == 2.0 ? RadialLaw::kotz(1, 0, 0.5, 2) : RadialLaw::kotz(1, 0, 1, 1));
      const double eta = bivariate_index(rho, th).eta;
      for (const auto& [x, y] : xy) {
        const double lim = limit_S(x, y, eta);
        const auto s_at = [&](double u) {
          return std::exp(s_tilde(model, {0, 1}, {x, y}, u) -
                          s_tilde(model, {0, 1}, {1.0, 1.0}, u));
        };
        const double s6 = s_at(1e6), s3 = s_at(1e3);
        const std::string tag = "theta=" + fmt(th) + " rho=" + fmt(rho) + " x=(" + fmt(x) +
                                "," + fmt(y) + ")";
        worst = std::max(worst, std::fabs(s6 / lim - 1.0));
        ck.expect(std::fabs(s6 / lim - 1.0) <= 0.10,
                  tag + ": S_u(1e6)=" + fmt(s6) + " vs limit " + fmt(lim));
        // The independent Gaussian cell has S_u = limit exactly at every u;
        // there the improvement check would compare quadrature noise against
        // quadrature noise, so agreement to 1e-6 at both levels counts.
        const bool at_floor =
            std::fabs(s6 - lim) < 1e-6 * lim && std::fabs(s3 - lim) < 1e-6 * lim;
        ck.expect(std::fabs(s6 - lim) < std::fabs(s3 - lim) || at_floor,
                  tag + ": closer at 1e6 than 1e3");
      }
    }
  }
  ck.note("worst |S_u/limit - 1| at 1e6: " + fmt(worst));
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {5, "limit-function", ck.pass, ck.detail.str(), secs};
}

CriterionResult c06_expansions(Level level) {
  Check ck;
  const auto t0 = Clock::now();
  // (a) closed Kotz display reduces to the Gaussian expansion.
  for (double rho : {0.25, 0.5}) {
    const EllipticalModel model = bivariate(rho, RadialLaw::kotz(1, 0, 0.5, 2));
    for (double u : {1e4, 1e6, 1e8}) {
      const StildeExpansion se = stilde_expansion(model, u);
      const double diff = std::fabs(*se.log_kotz_closed - log_gaussian_expansion(rho, u));
      ck.expect(diff <= 1e-12, "(a) rho=" + fmt(rho) + " u=" + fmt(u) + ": logdiff " + fmt(diff));
    }
  }
  // (b) oracle vs the Gaussian expansion.
  for (double rho : {0.25, 0.5}) {
    const EllipticalModel model = bivariate(rho, RadialLaw::gaussian_chi(2));
    const auto ratio = [&](double u) {
      return std::exp(s_tilde(model, {0, 1}, {1.0, 1.0}, u) - log_gaussian_expansion(rho, u));
    };
    const double r6 = ratio(1e6);
    ck.expect(r6 >= 0.8 && r6 <= 1.25, "(b) rho=" + fmt(rho) + ": ratio(1e6)=" + fmt(r6));
    if (level == Level::Full) {
      const double r4 = ratio(1e4), r8 = ratio(1e8);
      ck.expect(std::fabs(r8 - 1.0) < std::fabs(r4 - 1.0),
                "(b) rho=" + fmt(rho) + ": ratio closer to 1 at 1e8 (" + fmt(r8) + ") than 1e4 (" +
                    fmt(r4) + ")");
    }
  }
  // (c) general expansion vs oracle for Kotz radial laws. The o(1) decays
  // like 1/b(u), slowest for theta = 1 at high correlation, so that battery
  // stays at small rho (the 25%-at-1e6 regime).
  for (double th : {1.0, 2.0}) {
    const auto crhos = th == 1.0 ? std::vector<double>{0.0, 0.25}
                                 : std::vector<double>{0.0, 0.25, 0.5};
    for (double rho : crhos) {
      const EllipticalModel model =
          bivariate(rho, th == 2.0 ? RadialLaw::kotz(1, 0, 0.5, 2) : RadialLaw::kotz(1, 0, 1, 1));
      const auto ratio = [&](double u) {
        return std::exp(s_tilde(model, {0, 1}, {1.0, 1.0}, u) -
                        stilde_expansion(model, u).log_general);
      };
      const double r6 = ratio(1e6);
      const std::string tag = "(c) theta=" + fmt(th) + " rho=" + fmt(rho);
      ck.expect(r6 >= 0.8 && r6 <= 1.25, tag + ": ratio(1e6)=" + fmt(r6));
      if (level == Level::Full) {
        const double r4 = ratio(1e4), r8 = ratio(1e8);
        ck.expect(std::fabs(r8 - 1.0) < std::fabs(r4 - 1.0),
                  tag + ": closer to 1 at 1e8 (" + fmt(r8) + ") than 1e4 (" + fmt(r4) + ")");
      }
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {6, "expansions", ck.pass, ck.detail.str(), secs};
}

CriterionResult c07_discrimination(Level) {
  Check ck;
  const auto t0 = Clock::now();
  const EllipticalModel model = equicorrelated3(0.5, RadialLaw::kotz(1, 0, 1, 1));
  const SlopeFit fit = rv_slope(model, {0, 1, 2}, {1e3, 1e4, 1e5, 1e6, 1e7});
  const double adopted = -std::sqrt(1.5);  // -q^{1/2}
  const double literal = -1.5;             // -q
  const double dev_adopted = std::fabs(fit.slope - adopted) / std::fabs(adopted);
  const double dev_literal = std::fabs(fit.slope - literal) / std::fabs(literal);
  ck.expect(dev_adopted <= 0.05, "slope " + fmt(fit.slope) + " within 5% of " + fmt(adopted));
  ck.expect(dev_literal >= 0.15, "slope " + fmt(fit.slope) + " at least 15% from " + fmt(literal));
  ck.note("slope=" + fmt(fit.slope) + " dev(adopted)=" + fmt(dev_adopted) +
          " dev(literal)=" + fmt(dev_literal));
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {7, "convention-discrimination", ck.pass, ck.detail.str(), secs};
}

CriterionResult c08_theta0(Level level) {
  Check ck;
  const auto t0 = Clock::now();
  const auto rhos = level == Level::Full ? std::vector<double>{0.0, 0.5}
                                         : std::vector<double>{0.5};
  for (double rho : rhos) {
    // sigma = 2: the slowly varying factor (whose slope bias shrinks like
    // 1/(sigma sqrt(2 ln u))) is tame enough for the 7% band on this grid.
    const EllipticalModel model = bivariate(rho, RadialLaw::lognormal(0, 2));
    const SlopeFit fit = rv_slope(model, {0, 1}, {1e3, 1e4, 1e5, 1e6, 1e7});
    ck.expect(std::fabs(fit.slope + 1.0) <= 0.07,
              "lognormal rho=" + fmt(rho) + ": slope " + fmt(fit.slope));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {8, "theta0-lognormal", ck.pass, ck.detail.str(), secs};
}

CriterionResult c09_divergent(Level) {
  Check ck;
  const auto t0 = Clock::now();
  // alpha_rho = 2 at rho = -0.5 makes the limit-zero regime visible by 1e6.
  const EllipticalModel model = bivariate(-0.5, RadialLaw::exp_scaling(1.0));
  double prev_lo = 1e300, prev_hi = 0.0, first = 0.0, last = 0.0;
  for (double u : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    const double denom = s_tilde(model, {0, 1}, {1.0, 1.0}, u);
    const double lo = std::exp(s_tilde(model, {0, 1}, {0.5, 0.5}, u) - denom);
    const double hi = std::exp(s_tilde(model, {0, 1}, {2.0, 2.0}, u) - denom);
    ck.expect(lo < prev_lo, "S_u(0.5,0.5) strictly decreasing at u=" + fmt(u));
    ck.expect(hi > prev_hi, "S_u(2,2) strictly increasing at u=" + fmt(u));
    prev_lo = lo;
    prev_hi = hi;
    if (u == 1e2) first = lo;
    if (u == 1e6) last = lo;
  }
  ck.expect(first / last >= 10.0, "total decrease >= 10x (got " + fmt(first / last) + ")");
  ck.note("S_u(0.5,0.5): " + fmt(first) + " -> " + fmt(last));
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {9, "divergent-case", ck.pass, ck.detail.str(), secs};
}

CriterionResult c10_estimators(Level level) {
  Check ck;
  const auto t0 = Clock::now();
  const int n = level == Level::Full ? 100000 : 20000;
  const std::uint64_t seed = 2;

  struct Case {
    std::string name;
    EllipticalModel model;
    double rho, theta;
  };
  std::vector<Case> cases;
  for (double rho : {0.0, 0.5})
    cases.push_back({"gauss rho=" + fmt(rho), bivariate(rho, RadialLaw::gaussian_chi(2)), rho, 2.0});
  for (double rho : {0.0, 0.5})
    cases.push_back({"kotz1 rho=" + fmt(rho), bivariate(rho, RadialLaw::kotz(1, 0, 1, 1)), rho, 1.0});

  for (const auto& c : cases) {
    const SampleMatrix s = sample_elliptical(c.model, n, seed);
    const std::vector<double> col0 = s.column(0);
    const double rho_hat = rho_from_tau(kendall_tau(col0, s.column(1)));
    ck.expect(std::fabs(rho_hat - c.rho) <= 0.02, c.name + ": rho_hat " + fmt(rho_hat));
    int n_pos = 0;
    for (double v : col0)
      if (v > 0.0) ++n_pos;
    const double th = theta_hat(col0, default_kn(n_pos));
    ck.expect(std::fabs(th / c.theta - 1.0) <= 0.15, c.name + ": theta_hat " + fmt(th));
    const double eta = eta_hat_bivariate(rho_hat, th);
    const double eta_true = bivariate_index(c.rho, c.theta).eta;
    ck.expect(std::fabs(eta - eta_true) <= 0.05,
              c.name + ": eta_hat " + fmt(eta) + " vs " + fmt(eta_true));
  }

  // Trivariate plug-in pipeline.
  const EllipticalModel tri = equicorrelated3(0.5, RadialLaw::kotz(1, 0, 0.5, 2));
  const SampleMatrix st = sample_elliptical(tri, n, seed);
  const PartialEstimate pe = eta_hat_partial(st, {0, 1, 2}, 0);
  ck.expect(std::fabs(pe.q - 1.5) <= 0.1, "trivariate q_hat " + fmt(pe.q));
  ck.expect(std::fabs(pe.eta - 1.0 / 1.5) <= 0.07, "trivariate eta_I " + fmt(pe.eta));

  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (level == Level::Full) ck.expect(secs < 120.0, "runtime < 2 min");
  ck.note("n=" + std::to_string(n) + " seed=" + std::to_string(seed));
  return {10, "estimators", ck.pass, ck.detail.str(), secs};
}

CriterionResult c11_equivalences(Level level) {
  Check ck;
  const auto t0 = Clock::now();

  CounterRng rng(1111);
  const int reps = level == Level::Full ? 100 : 25;
  for (int rep = 0; rep < reps; ++rep) {
    const int n = 50 + static_cast<int>(rng.next_u64() % 1950);
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.next_uniform();
      y[i] = (rng.next_u64() % 10 == 0) ? std::floor(rng.next_uniform() * 8.0)
                                        : rng.next_uniform() * 3.0;
    }
    if (std::fabs(kendall_tau(x, y) - brute_kendall(x, y)) > 1e-14) {
      ck.expect(false, "fast Kendall == reference at rep " + std::to_string(rep));
      break;
    }
  }

  const int nsphere = level == Level::Full ? 100000 : 20000;
  const Matrix dirs = sample_sphere(3, nsphere, CounterRng(77));
  double worst_norm = 0.0;
  for (int i = 0; i < nsphere; ++i) {
    const double norm = std::sqrt(dirs(i, 0) * dirs(i, 0) + dirs(i, 1) * dirs(i, 1) +
                                  dirs(i, 2) * dirs(i, 2));
    worst_norm = std::max(worst_norm, std::fabs(norm - 1.0));
  }
  ck.expect(worst_norm <= 1e-12, "sphere norms within 1e-12 (worst " + fmt(worst_norm) + ")");

  Matrix raw = Matrix::identity(3);
  raw(1, 0) = 0.5;
  raw(2, 0) = 0.2;
  raw(2, 1) = -0.3;
  const EllipticalModel model(CorrelationMatrix::validate(raw), RadialLaw::gaussian_chi(3));
  const int n = level == Level::Full ? 100000 : 20000;
  const SampleMatrix s = sample_elliptical(model, n, 4242);
  double worst_corr = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) {
      double sxy = 0.0, sxx = 0.0, syy = 0.0;
      for (int t = 0; t < n; ++t) {
        sxy += s.at(t, i) * s.at(t, j);
        sxx += s.at(t, i) * s.at(t, i);
        syy += s.at(t, j) * s.at(t, j);
      }
      worst_corr = std::max(worst_corr, std::fabs(sxy / std::sqrt(sxx * syy) - raw(i, j)));
    }
  ck.expect(worst_corr <= 0.02, "empirical correlation within 0.02 (worst " + fmt(worst_corr) + ")");
  ck.note("kendall reps=" + std::to_string(reps) + ", worst norm dev " + fmt(worst_norm) +
          ", worst corr dev " + fmt(worst_corr));
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {11, "exact-equivalences", ck.pass, ck.detail.str(), secs};
}

CriterionResult c12_deep_tail(Level level) {
  Check ck;
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, EllipticalModel>> models;
  const auto gauss_rhos = level == Level::Full ? std::vector<double>{0.0, 0.25, 0.5}
                                               : std::vector<double>{0.5};
  for (double rho : gauss_rhos)
    models.emplace_back("gauss rho=" + fmt(rho), bivariate(rho, RadialLaw::gaussian_chi(2)));
  const auto thetas = level == Level::Full ? std::vector<double>{1.0, 2.0, 3.0}
                                           : std::vector<double>{1.0, 3.0};
  const auto kotz_rhos = level == Level::Full ? std::vector<double>{-0.3, 0.0, 0.5}
                                              : std::vector<double>{-0.3, 0.5};
  for (double th : thetas)
    for (double rho : kotz_rhos)
      models.emplace_back("kotz theta=" + fmt(th) + " rho=" + fmt(rho),
                          bivariate(rho, RadialLaw::kotz(1, 0, 1, th)));
  for (double rho : {0.0, 0.5})
    models.emplace_back("lognormal rho=" + fmt(rho), bivariate(rho, RadialLaw::lognormal(0, 1)));

  for (const auto& [name, model] : models) {
    try {
      const double v = s_tilde(model, {0, 1}, {1.0, 1.0}, 1e8);
      ck.expect(std::isfinite(v) && v > kLogFloor && v < 0.0,
                name + ": finite ln Stilde at u=1e8 (got " + fmt(v) + ")");
    } catch (const Error& e) {
      ck.expect(false, name + ": s_tilde(1e8) threw " + std::string(e.what()));
    }
  }
  const EllipticalModel tri = equicorrelated3(0.5, RadialLaw::kotz(1, 0, 1, 1));
  const double v3 = s_tilde(tri, {0, 1, 2}, {1.0, 1.0, 1.0}, 1e8);
  ck.expect(std::isfinite(v3) && v3 > kLogFloor, "trivariate finite at u=1e8");

  // Beyond exp(-600): typed signal rather than a flushed zero.
  const EllipticalModel g = bivariate(0.0, RadialLaw::gaussian_chi(2));
  bool typed = false;
  try {
    (void)joint_survival_2d(g, 40.0, 40.0);
  } catch (const Underflow&) {
    typed = true;
  }
  ck.expect(typed, "joint survival beyond exp(-600) raises Underflow");
  ck.note(std::to_string(models.size()) + " models probed at u=1e8");
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {12, "deep-tail-robustness", ck.pass, ck.detail.str(), secs};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(Level level, std::ostream& log) {
  std::vector<CriterionResult> results;
  const auto run = [&](CriterionResult (*fn)(Level)) {
    CriterionResult r = fn(level);
    results.push_back(r);
    std::ostringstream line;
    line << (r.pass ? "[PASS] " : "[FAIL] ") << 'C' << (r.id < 10 ? "0" : "") << r.id << ' '
         << r.name << " (" << fmt(r.seconds) << "s)";
    if (!r.detail.empty()) line << ": " << r.detail;
    log << line.str() << "\n" << std::flush;
  };
  run(c01_qp);
  run(c02_lemma);
  run(c03_scaling);
  run(c04_rv_index);
  run(c05_limit);
  run(c06_expansions);
  run(c07_discrimination);
  run(c08_theta0);
  run(c09_divergent);
  run(c10_estimators);
  run(c11_equivalences);
  run(c12_deep_tail);
  int failed = 0;
  for (const auto& r : results)
    if (!r.pass) ++failed;
  log << (failed == 0 ? "ALL CRITERIA PASSED" : std::to_string(failed) + " CRITERIA FAILED")
      << " (" << results.size() << " total)\n";
  return results;
}

}  // namespace taildep::accept
