#include "taildep/survival_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "taildep/errors.hpp"
#include "taildep/math.hpp"

namespace taildep {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kTolMarginal = 1e-9;
constexpr double kTolJoint2d = 1e-9;
constexpr double kTolJoint3d = 1e-7;

double gate(double logp, const char* what) {
  if (logp < kLogFloor)
    throw Underflow(std::string(what) + ": log-probability below -600");
  return logp;
}

// ln P{X_1 > a} without the underflow gate (used inside root finding).
double marginal_raw(const EllipticalModel& model, double a) {
  if (a < 0.0) throw DomainError("marginal_survival: a must be >= 0");
  if (a == 0.0) return -0.6931471805599453;
  const RadialLaw& law = model.radial;
  if (model.dim() == 2) {
    // P{X1 > a} = (1/pi) int_0^{pi/2} P{R > a / cos phi} dphi
    const auto f = [&](double phi) {
      const double c = std::cos(phi);
      if (c <= 1e-300) return kLogZero;
      return law.log_survival(a / c);
    };
    return log_adaptive_integral(f, 0.0, 0.5 * kPi, kTolMarginal, 65) - std::log(kPi);
  }
  if (model.dim() == 3) {
    // First sphere coordinate is uniform on [-1, 1]:
    // P{X1 > a} = (1/2) int_0^1 P{R > a / t} dt
    const auto f = [&](double t) {
      if (t <= 1e-300) return kLogZero;
      return law.log_survival(a / t);
    };
    return log_adaptive_integral(f, 0.0, 1.0, kTolMarginal, 65) - 0.6931471805599453;
  }
  throw DomainError("marginal_survival: oracle supports dimensions 2 and 3");
}

// ln P{X_i > a_i for i in I} by quadrature over the angular measure. The
// thresholds vector is aligned with I.
double joint_raw(const EllipticalModel& model, const std::vector<int>& I,
                 const std::vector<double>& a) {
  const Matrix& L = model.sigma.chol();
  const RadialLaw& law = model.radial;
  for (double v : a)
    if (!(v > 0.0)) throw DomainError("joint survival: thresholds must be > 0");

  if (model.dim() == 2 && I.size() == 2) {
    // Positive cone in the angle: cos phi > 0 and rho cos phi + s sin phi > 0,
    // i.e. phi in (delta - pi/2, pi/2) with delta = arccos(rho).
    const double rho = model.sigma.rho(0, 1);
    const double s = std::sqrt(std::max(0.0, (1.0 - rho) * (1.0 + rho)));
    const double delta = std::atan2(s, rho);
    const double lo = delta - 0.5 * kPi, hi = 0.5 * kPi;
    const auto f = [&](double phi) {
      const double c1 = std::cos(phi);
      const double c2 = rho * c1 + s * std::sin(phi);
      if (c1 <= 1e-300 || c2 <= 1e-300) return kLogZero;
      return law.log_survival(std::max(a[0] / c1, a[1] / c2));
    };
    return log_adaptive_integral(f, lo, hi, kTolJoint2d, 65) - std::log(2.0 * kPi);
  }

  if (model.dim() == 3) {
    // u = (sqrt(1-t^2) cos phi, sqrt(1-t^2) sin phi, t), measure dphi dt/(4 pi).
    const auto integrand = [&](double phi, double t) {
      const double rt = std::sqrt(std::max(0.0, 1.0 - t * t));
      const double ux = rt * std::cos(phi), uy = rt * std::sin(phi);
      double threshold = 0.0;
      for (std::size_t j = 0; j < I.size(); ++j) {
        const int i = I[j];
        const double c = L(i, 0) * ux + L(i, 1) * uy + L(i, 2) * t;
        if (c <= 1e-300) return kLogZero;
        threshold = std::max(threshold, a[j] / c);
      }
      return law.log_survival(threshold);
    };
    const auto inner = [&](double t) {
      return log_adaptive_integral([&](double phi) { return integrand(phi, t); },
                                   0.0, 2.0 * kPi, 0.1 * kTolJoint3d, 129);
    };
    return log_adaptive_integral(inner, -1.0, 1.0, kTolJoint3d, 65) -
           std::log(4.0 * kPi);
  }
  throw DomainError("joint survival: oracle supports dimensions 2 and 3");
}

double s_tilde_raw(const EllipticalModel& model, const std::vector<int>& I,
                   const std::vector<double>& x, double u) {
  if (I.size() < 2 || I.size() > 3 || x.size() != I.size())
    throw DomainError("s_tilde: |I| must be 2 or 3 with matching x");
  for (std::size_t i = 0; i < I.size(); ++i) {
    if (I[i] < 0 || I[i] >= model.dim()) throw DomainError("s_tilde: index out of range");
    if (i > 0 && I[i] <= I[i - 1]) throw DomainError("s_tilde: I must be sorted, unique");
    if (!(x[i] > 0.0 && x[i] < u)) throw DomainError("s_tilde: need 0 < x_i < u");
  }
  // All marginals coincide, so equal x_i share one quantile inversion.
  std::vector<double> a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    bool cached = false;
    for (std::size_t j = 0; j < i; ++j)
      if (x[j] == x[i]) { a[i] = a[j]; cached = true; break; }
    if (!cached) a[i] = marginal_quantile(model, 1.0 - x[i] / u);
  }
  return joint_raw(model, I, a);
}

}  // namespace

double marginal_survival(const EllipticalModel& model, double a) {
  return gate(marginal_raw(model, a), "marginal_survival");
}

double marginal_quantile(const EllipticalModel& model, double p) {
  if (!(p > 0.5 && p < 1.0))
    throw DomainError("marginal_quantile: p outside (0.5, 1); use the log form for deeper tails");
  return marginal_quantile_log(model, std::log1p(-p));
}

double marginal_quantile_log(const EllipticalModel& model, double target) {
  if (!(target >= -640.0 && target < -0.6931471805599453))
    throw DomainError("marginal_quantile: log-survival target outside [-640, ln 1/2)");
  double hi = 1.0;
  int guard = 0;
  while (marginal_raw(model, hi) >= target) {
    hi *= 2.0;
    if (++guard > 200) throw ConvergenceFailure("marginal_quantile: no upper bracket");
  }
  return brent_root([&](double v) { return marginal_raw(model, v) - target; },
                    0.0, hi, 1e-13, 200);
}

double joint_survival_2d(const EllipticalModel& model, double a, double b) {
  if (model.dim() != 2) throw DomainError("joint_survival_2d: bivariate models only");
  return gate(joint_raw(model, {0, 1}, {a, b}), "joint_survival_2d");
}

double joint_survival_3d(const EllipticalModel& model, double a1, double a2, double a3) {
  if (model.dim() != 3) throw DomainError("joint_survival_3d: trivariate models only");
  return gate(joint_raw(model, {0, 1, 2}, {a1, a2, a3}), "joint_survival_3d");
}

double s_tilde(const EllipticalModel& model, const std::vector<int>& I,
               const std::vector<double>& x, double u) {
  return gate(s_tilde_raw(model, I, x, u), "s_tilde");
}

std::vector<std::pair<double, double>> chi_curve(const EllipticalModel& model,
                                                 const std::vector<double>& u_levels) {
  if (model.dim() != 2) throw DomainError("chi_curve: bivariate models only");
  std::vector<std::pair<double, double>> out;
  out.reserve(u_levels.size());
  for (double u : u_levels) {
    if (!(u > 0.0)) throw DomainError("chi_curve: levels must be > 0");
    const double lj = joint_raw(model, {0, 1}, {u, u});
    const double lm = marginal_raw(model, u);
    out.emplace_back(u, std::exp(std::min(0.0, lj - lm)));
  }
  return out;
}

SlopeFit rv_slope(const EllipticalModel& model, const std::vector<int>& I,
                  const std::vector<double>& u_grid) {
  if (u_grid.size() < 5) throw DomainError("rv_slope: need >= 5 grid points");
  for (std::size_t i = 1; i < u_grid.size(); ++i)
    if (!(u_grid[i] > u_grid[i - 1])) throw DomainError("rv_slope: grid must increase");
  if (std::log10(u_grid.back() / u_grid.front()) < 4.0 - 1e-9)
    throw DomainError("rv_slope: grid must span >= 4 decades");

  SlopeFit fit;
  fit.u_grid = u_grid;
  std::vector<double> lnu;
  const std::vector<double> ones(I.size(), 1.0);
  for (double u : u_grid) {
    fit.log_values.push_back(s_tilde(model, I, ones, u));
    lnu.push_back(std::log(u));
  }
  const LineFit lf = fit_line(lnu, fit.log_values);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.max_residual = lf.max_residual;
  return fit;
}

}  // namespace taildep
