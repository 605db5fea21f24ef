#include "taildep/math.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "taildep/errors.hpp"

namespace taildep {

double logsumexp(std::span<const double> xs) {
  double m = kLogZero;
  for (double x : xs) m = std::max(m, x);
  if (m <= kLogZero) return kLogZero;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

double log_erfc(double x) {
  if (x < 6.0) return std::log(std::erfc(x));
  // Laplace continued fraction for the normal tail, evaluated bottom-up:
  // 1 - Phi(y) = phi(y) / (y + 1/(y + 2/(y + 3/(y + ...)))), y = x sqrt(2).
  const double y = x * 1.4142135623730951;
  double d = 0.0;
  for (int n = 100; n >= 1; --n) d = n / (y + d);
  // erfc(x) = 2 (1 - Phi(y)); ln 2 - ln sqrt(2 pi) = -0.225791...
  return -0.22579135264472741 - x * x - std::log(y + d);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p outside (0,1)");
  // Acklam rational approximation, then one Halley step.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= phigh) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement on Phi(x) - p = 0 via the upper tail (stable far out).
  const double e = 0.5 * std::erfc(-x * 0.7071067811865476) - p;
  const double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

namespace {

struct PanelPoint {
  double x;
  double g;      // exp(log_f - shift)
  double log_f;  // raw log-integrand
};

struct AdaptiveState {
  const std::function<double(double)>* log_f;
  double shift = 0.0;
  double cutoff = 60.0;
  double rel_tol = 1e-9;
  long evals = 0;
  long max_evals = 4000000;

  PanelPoint eval(double x) {
    if (++evals > max_evals)
      throw QuadratureFailure("log_adaptive_integral: evaluation budget exhausted");
    const double lf = (*log_f)(x);
    const double e = lf - shift;
    return {x, e > -745.0 ? std::exp(e) : 0.0, lf};
  }
};

double simpson(double h, double g0, double g1, double g2) {
  return h / 6.0 * (g0 + 4.0 * g1 + g2);
}

// The integrand is nonnegative, so a per-panel tolerance relative to the
// panel's own value bounds the total relative error by rel_tol directly and
// cannot stall on unresolved boundary layers (the allowance tracks the panel
// mass, not the width).
double adapt(AdaptiveState& st, const PanelPoint& p0, const PanelPoint& p2,
             const PanelPoint& p1, double whole, int depth) {
  const PanelPoint l = st.eval(0.5 * (p0.x + p1.x));
  const PanelPoint r = st.eval(0.5 * (p1.x + p2.x));
  const double h = p2.x - p0.x;
  const double left = simpson(0.5 * h, p0.g, l.g, p1.g);
  const double right = simpson(0.5 * h, p1.g, r.g, p2.g);
  const double refined = left + right;
  const double delta = refined - whole;
  // Negligible panel: everything at least cutoff nats below the running max.
  const double top = std::max({p0.log_f, l.log_f, p1.log_f, r.log_f, p2.log_f});
  if (top < st.shift - st.cutoff) return refined;
  if (std::fabs(delta) <= 15.0 * st.rel_tol * refined ||
      h < 1e-13 * (std::fabs(p0.x) + std::fabs(p2.x) + 1.0))
    return refined + delta / 15.0;
  if (depth > 60)
    throw QuadratureFailure("log_adaptive_integral: refinement did not converge");
  return adapt(st, p0, p1, l, left, depth + 1) +
         adapt(st, p1, p2, r, right, depth + 1);
}

}  // namespace

double log_adaptive_integral(const std::function<double(double)>& log_f,
                             double a, double b, double rel_tol,
                             int coarse_points, double cutoff_nats) {
  if (!(b > a)) return kLogZero;
  if (coarse_points < 5) coarse_points = 5;
  if (coarse_points % 2 == 0) ++coarse_points;

  AdaptiveState st;
  st.log_f = &log_f;
  st.cutoff = cutoff_nats;
  st.rel_tol = rel_tol;

  // Coarse scan fixes the shift (max of the log-integrand).
  std::vector<double> xs(coarse_points), lfs(coarse_points);
  const double h = (b - a) / (coarse_points - 1);
  double shift = kLogZero;
  for (int i = 0; i < coarse_points; ++i) {
    xs[i] = (i == coarse_points - 1) ? b : a + i * h;
    lfs[i] = log_f(xs[i]);
    shift = std::max(shift, lfs[i]);
  }
  st.evals = coarse_points;
  if (shift <= kLogZero) return kLogZero;
  st.shift = shift;

  std::vector<PanelPoint> pts(coarse_points);
  for (int i = 0; i < coarse_points; ++i) {
    const double e = lfs[i] - shift;
    pts[i] = {xs[i], e > -745.0 ? std::exp(e) : 0.0, lfs[i]};
  }
  double total = 0.0;
  for (int i = 0; i + 2 < coarse_points; i += 2) {
    const double whole = simpson(pts[i + 2].x - pts[i].x, pts[i].g, pts[i + 1].g, pts[i + 2].g);
    total += adapt(st, pts[i], pts[i + 2], pts[i + 1], whole, 0);
  }
  if (!(total > 0.0)) return kLogZero;
  return shift + std::log(total);
}

double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double rel_tol, int max_iter) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw DomainError("brent_root: endpoints do not bracket a root");
  // Absolute floor so roots at (or jumping through) zero still terminate.
  const double abs_tol = 1e-15 * (std::fabs(lo) + std::fabs(hi));
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) +
                       0.5 * rel_tol * std::fabs(b) + abs_tol;
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol || fb == 0.0) return b;
    if (std::fabs(e) < tol || std::fabs(fa) <= std::fabs(fb)) {
      d = m; e = m;
    } else {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, rr = fb / fc;
        p = s * (2.0 * m * qq * (qq - rr) - (b - a) * (rr - 1.0));
        q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
        e = d; d = p / q;
      } else {
        d = m; e = m;
      }
    }
    a = b; fa = fb;
    b += (std::fabs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a; fc = fa; d = b - a; e = d;
    }
  }
  throw ConvergenceFailure("brent_root: max iterations exceeded");
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("fit_line: need matching n >= 2");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw DomainError("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i)
    fit.max_residual = std::max(fit.max_residual,
                                std::fabs(y[i] - fit.intercept - fit.slope * x[i]));
  return fit;
}

}  // namespace taildep
