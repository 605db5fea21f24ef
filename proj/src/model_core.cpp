#include "taildep/model_core.hpp"

#include <cmath>
#include <sstream>

#include "taildep/errors.hpp"
#include "taildep/math.hpp"

namespace taildep {

namespace {

// ln(K u^N exp(-r u^theta)) without the u0 clamp; kLogZero when it
// over/underflows.
double kotz_log_tail(double K, double N, double r, double theta, double u) {
  if (u <= 0.0) return N < 0.0 ? 0.0 : (N > 0.0 ? kLogZero : std::log(K));
  const double v = std::log(K) + N * std::log(u) - r * std::pow(u, theta);
  return std::isfinite(v) ? v : kLogZero;
}

// ln P{chi^2_k > u^2}, exact finite forms.
double gaussian_chi_log_survival(int dim, double u) {
  if (u <= 0.0) return 0.0;
  const double y = 0.5 * u * u;  // gamma argument, shape dim/2
  if (dim == 2) return -y;
  const double logy = std::log(y);
  std::vector<double> terms;
  if (dim % 2 == 0) {
    for (int j = 0; j <= dim / 2 - 1; ++j)
      terms.push_back(-y + j * logy - std::lgamma(j + 1.0));
  } else {
    terms.push_back(log_erfc(std::sqrt(y)));
    for (int j = 1; j <= (dim - 1) / 2; ++j)
      terms.push_back(-y + (j - 0.5) * logy - std::lgamma(j + 0.5));
  }
  const double v = logsumexp(std::span<const double>(terms.data(), terms.size()));
  return std::min(v, 0.0);
}

}  // namespace

RadialLaw::RadialLaw(RadialFamily f, double p1, double p2, double p3, double p4)
    : family_(f), p1_(p1), p2_(p2), p3_(p3), p4_(p4) {}

RadialLaw RadialLaw::gaussian_chi(int dim) {
  if (dim < 1) throw DomainError("gaussian_chi: dim must be >= 1");
  return RadialLaw(RadialFamily::GaussianChi, static_cast<double>(dim), 0, 0, 0);
}

RadialLaw RadialLaw::unit_gumbel() { return RadialLaw(RadialFamily::UnitGumbel, 0, 0, 0, 0); }

RadialLaw RadialLaw::kotz(double K, double N, double r, double theta) {
  if (!(K > 0.0) || !(r > 0.0) || !(theta > 0.0))
    throw DomainError("kotz: need K > 0, r > 0, theta > 0");
  RadialLaw law(RadialFamily::KotzTypeIII, K, N, r, theta);
  // Left endpoint of the strictly decreasing branch with value <= 1.
  const double u_mono = N > 0.0 ? std::pow(N / (r * theta), 1.0 / theta) : 0.0;
  double u0 = u_mono;
  const double at_mono = N > 0.0 ? kotz_log_tail(K, N, r, theta, u_mono) : std::log(K);
  if (at_mono > 0.0 || (N < 0.0)) {
    // Value exceeds 1 at the monotone threshold (or blows up at 0 for N < 0):
    // locate the root of K u^N e^{-r u^theta} = 1 on the decreasing branch.
    double lo = std::max(u_mono, 1e-12), hi = std::max(1.0, 2.0 * lo);
    if (N < 0.0) {
      lo = 1e-12;
      while (kotz_log_tail(K, N, r, theta, lo) < 0.0 && lo > 1e-300) lo *= 0.5;
    }
    while (kotz_log_tail(K, N, r, theta, hi) > 0.0 && hi < 1e300) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (kotz_log_tail(K, N, r, theta, mid) > 0.0) lo = mid; else hi = mid;
    }
    u0 = 0.5 * (lo + hi);
  }
  law.u0_ = u0;
  return law;
}

RadialLaw RadialLaw::lognormal(double mu, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("lognormal: sigma must be > 0");
  return RadialLaw(RadialFamily::Lognormal, mu, sigma, 0, 0);
}

RadialLaw RadialLaw::exp_scaling(double a) {
  if (!(a > 0.0)) throw DomainError("exp_scaling: a must be > 0");
  return RadialLaw(RadialFamily::ExpScaling, a, 0, 0, 0);
}

double RadialLaw::log_survival(double u) const {
  if (u < 0.0) throw DomainError("log_survival: u must be >= 0");
  if (u >= 1e290) return kLogZero;
  switch (family_) {
    case RadialFamily::GaussianChi:
      return gaussian_chi_log_survival(static_cast<int>(p1_), u);
    case RadialFamily::UnitGumbel:
      // 1 - Lambda(u) with Lambda(u) = exp(-e^{-u}); atom at zero: the
      // survival jumps from 1 to 1 - e^{-1} at u = 0.
      return log1mexp(-std::exp(-u));
    case RadialFamily::KotzTypeIII: {
      if (u <= u0_) return 0.0;
      return std::min(0.0, kotz_log_tail(p1_, p2_, p3_, p4_, u));
    }
    case RadialFamily::Lognormal: {
      if (u <= 0.0) return 0.0;
      const double z = (std::log(u) - p1_) / p2_;
      return std::min(0.0, -0.6931471805599453 + log_erfc(z * 0.7071067811865476));
    }
    case RadialFamily::ExpScaling: {
      const double au = p1_ * u;
      if (au > 700.0) return kLogZero;
      return -std::expm1(au) / p1_;
    }
  }
  return kLogZero;
}

double RadialLaw::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p outside (0,1)");
  return quantile_log_survival(std::log1p(-p));
}

double RadialLaw::quantile_log_survival(double target) const {
  if (!(target < 0.0)) throw DomainError("quantile: log-survival target must be < 0");
  double lo = u0_;
  if (log_survival(lo) < target) return lo;  // target sits in an atom at u0
  double hi = std::max(1.0, 2.0 * lo + 1.0);
  int guard = 0;
  while (log_survival(hi) >= target) {
    hi *= 2.0;
    if (++guard > 200) throw ConvergenceFailure("radial quantile: no upper bracket");
  }
  return brent_root([&](double u) { return log_survival(u) - target; }, lo, hi, 1e-13, 200);
}

double RadialLaw::scaling_w(double u) const {
  switch (family_) {
    case RadialFamily::KotzTypeIII:
      return p3_ * p4_ * std::pow(u, p4_ - 1.0);
    case RadialFamily::ExpScaling:
      return std::exp(p1_ * u);
    default:
      return scaling_w_quadrature(u);
  }
}

double RadialLaw::scaling_w_quadrature(double u) const {
  if (!(u > u0_)) throw DomainError("scaling_w: u must exceed the support lower endpoint");
  const double num = log_survival(u);
  // Truncate the tail integral where the survival has dropped 60 nats.
  double hi = std::max(2.0 * u, u + 1.0);
  int guard = 0;
  while (log_survival(hi) > num - 60.0) {
    hi *= 2.0;
    if (++guard > 200) throw QuadratureFailure("scaling_w: tail truncation failed");
  }
  const double log_den = log_adaptive_integral(
      [this](double s) { return log_survival(s); }, u, hi, 1e-10, 65);
  return std::exp(num - log_den);
}

std::optional<double> RadialLaw::weibull_theta() const {
  switch (family_) {
    case RadialFamily::GaussianChi: return 2.0;
    case RadialFamily::UnitGumbel: return 1.0;
    case RadialFamily::KotzTypeIII: return p4_;
    case RadialFamily::Lognormal: return 0.0;
    case RadialFamily::ExpScaling: return std::nullopt;
  }
  return std::nullopt;
}

std::string RadialLaw::describe() const {
  std::ostringstream os;
  switch (family_) {
    case RadialFamily::GaussianChi: os << "gaussian_chi(dim=" << static_cast<int>(p1_) << ")"; break;
    case RadialFamily::UnitGumbel: os << "unit_gumbel"; break;
    case RadialFamily::KotzTypeIII:
      os << "kotz(K=" << p1_ << ",N=" << p2_ << ",r=" << p3_ << ",theta=" << p4_ << ")";
      break;
    case RadialFamily::Lognormal: os << "lognormal(mu=" << p1_ << ",sigma=" << p2_ << ")"; break;
    case RadialFamily::ExpScaling: os << "exp_scaling(a=" << p1_ << ")"; break;
  }
  return os.str();
}

CorrelationMatrix CorrelationMatrix::validate(const Matrix& raw) {
  const int k = raw.rows();
  if (k != raw.cols() || k < 2)
    throw DomainError("validate_correlation: need a square matrix with k >= 2");
  Matrix sigma(k, k);
  for (int i = 0; i < k; ++i) {
    if (std::fabs(raw(i, i) - 1.0) > 1e-12)
      throw DiagonalNotUnit("validate_correlation: diagonal entry differs from 1");
    sigma(i, i) = 1.0;
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j) {
      const double v = raw(i, j);  // lower triangle wins
      if (std::fabs(v) >= 1.0 - 1e-6)
        throw EntryOutOfRange("validate_correlation: off-diagonal entry outside (-1, 1)");
      sigma(i, j) = v;
      sigma(j, i) = v;
    }
  }
  auto chol = cholesky_lower(sigma, 1e-12);
  if (!chol) throw NotPositiveDefinite("validate_correlation: Cholesky pivot <= 1e-12");
  return CorrelationMatrix(std::move(sigma), std::move(*chol));
}

std::vector<MdaRow> mda_diagnostic(const RadialLaw& law,
                                   const std::vector<double>& u_grid,
                                   const std::vector<double>& x_grid) {
  if (u_grid.empty() || x_grid.empty()) throw DomainError("mda_diagnostic: empty grid");
  std::vector<MdaRow> rows;
  rows.reserve(u_grid.size() * x_grid.size());
  for (double u : u_grid) {
    if (!(u > law.support_lower()))
      throw DomainError("mda_diagnostic: u must exceed the support lower endpoint");
    const double w = law.scaling_w(u);
    const double base = law.log_survival(u);
    for (double x : x_grid) {
      const double ratio = std::exp(law.log_survival(u + x / w) - base);
      rows.push_back({u, x, ratio, ratio - std::exp(-x)});
    }
  }
  return rows;
}

}  // namespace taildep
