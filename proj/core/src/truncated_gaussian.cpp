#include "stmir/truncated_gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "stmir/error.hpp"

namespace stmir {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSupportSigmas = 40.0;

}  // namespace

double std_normal_pdf(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); }
double std_normal_cdf(double t) { return 0.5 * std::erfc(-t / kSqrt2); }
double std_normal_sf(double t) { return 0.5 * std::erfc(t / kSqrt2); }

double std_normal_interval_mass(double alpha, double beta) {
  if (alpha >= 0.0) return std_normal_sf(alpha) - std_normal_sf(beta);
  if (beta <= 0.0) return std_normal_cdf(beta) - std_normal_cdf(alpha);
  return 1.0 - std_normal_cdf(alpha) - std_normal_sf(beta);
}

TruncatedGaussian::TruncatedGaussian(double mu_bar, double sigma_bar, double a, double b)
    : mu_bar_(mu_bar), sigma_bar_(sigma_bar), a_(a), b_(b) {
  if (!std::isfinite(mu_bar) || !std::isfinite(sigma_bar) || !std::isfinite(a) || !std::isfinite(b))
    throw Error(Errc::InvalidSpec, "distribution parameters must be finite");
  if (!(sigma_bar > 0.0)) throw Error(Errc::InvalidSpec, "sigma_bar must be > 0");
  if (!(a >= 0.0 && a < b)) throw Error(Errc::InvalidSpec, "need 0 <= a < b");
  alpha_ = (a - mu_bar) / sigma_bar;
  beta_ = (b - mu_bar) / sigma_bar;
  z_ = std_normal_interval_mass(alpha_, beta_);
  if (!(z_ > 1e-12)) throw Error(Errc::InvalidSpec, "truncation interval retains mass <= 1e-12");

  const double pa = std_normal_pdf(alpha_), pb = std_normal_pdf(beta_);
  const double ratio = (pb - pa) / z_;
  mu_ = std::clamp(mu_bar - sigma_bar * ratio, a, b);
  const double spread = (beta_ * pb - alpha_ * pa) / z_;
  sigma2_ = sigma_bar * sigma_bar * (1.0 - spread - ratio * ratio);
  sigma2_ = std::min(sigma2_, sigma_bar * sigma_bar);
  if (!(sigma2_ > 0.0)) throw Error(Errc::InvalidSpec, "truncated variance is not positive");
}

double TruncatedGaussian::density(double x) const {
  if (x < a_ || x > b_) return 0.0;
  return std_normal_pdf((x - mu_bar_) / sigma_bar_) / (sigma_bar_ * z_);
}

TruncatedGaussian TruncatedGaussian::scale(double q) const {
  if (!(q > 0.0) || !std::isfinite(q)) throw Error(Errc::DomainError, "scale factor must be finite and > 0");
  return TruncatedGaussian(q * mu_bar_, q * sigma_bar_, q * a_, q * b_);
}

std::pair<double, double> TruncatedGaussian::effective_support() const {
  double lo = std::max(a_, mu_bar_ - kSupportSigmas * sigma_bar_);
  double hi = std::min(b_, mu_bar_ + kSupportSigmas * sigma_bar_);
  if (!(lo < hi)) return {a_, b_};
  return {lo, hi};
}

std::vector<double> TruncatedGaussian::quadrature_breakpoints() const {
  auto [lo, hi] = effective_support();
  return graded_breakpoints(lo, hi);
}

double TruncatedGaussian::expectation(const std::function<double(double)>& f, const QuadratureOptions& options) const {
  // Integrate over t = (x - mu_bar) / sigma_bar so the density is evaluated
  // exactly even when sigma_bar is far below the spacing of doubles near x.
  const auto [lo, hi] = effective_support();
  std::vector<double> bp = quadrature_breakpoints();
  for (double& v : bp) v = (v - mu_bar_) / sigma_bar_;
  const double inv_z = 1.0 / z_;
  auto integrand = [&](double t) {
    const double x = std::clamp(mu_bar_ + sigma_bar_ * t, lo, hi);
    return f(x) * std_normal_pdf(t) * inv_z;
  };
  return integrate(integrand, bp, options).value;
}

double TruncatedGaussian::sample(Rng& rng) const {
  const double u = rng.uniform();
  constexpr double lo_p = std::numeric_limits<double>::min();
  constexpr double hi_p = 1.0 - 0x1.0p-53;
  double t;
  if (alpha_ >= 0.0) {
    // Upper tail: invert the survival function.
    const double qa = std_normal_sf(alpha_), qb = std_normal_sf(beta_);
    const double q = std::clamp(qa - u * (qa - qb), lo_p, hi_p);
    t = kSqrt2 * boost::math::erfc_inv(2.0 * q);
  } else {
    const double pa = std_normal_cdf(alpha_), pb = std_normal_cdf(beta_);
    const double p = std::clamp(pa + u * (pb - pa), lo_p, hi_p);
    t = -kSqrt2 * boost::math::erfc_inv(2.0 * p);
  }
  return std::clamp(mu_bar_ + sigma_bar_ * t, a_, b_);
}

MeanVariance truncated_mean_var(const TruncatedGaussian& dist) { return {dist.mu(), dist.sigma2()}; }

}  // namespace stmir
