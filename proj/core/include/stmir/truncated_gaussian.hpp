#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "stmir/quadrature.hpp"
#include "stmir/random.hpp"

namespace stmir {

double std_normal_pdf(double t);
double std_normal_cdf(double t);
// 1 - cdf(t), accurate in the upper tail.
double std_normal_sf(double t);
// Mass on [alpha, beta], taken on the side that avoids cancellation.
double std_normal_interval_mass(double alpha, double beta);

struct MeanVariance {
  double mu;
  double sigma2;
};

// Gaussian N(mu_bar, sigma_bar^2) conditioned on [a, b].
class TruncatedGaussian {
 public:
  // Throws Error(InvalidSpec) unless 0 <= a < b < inf, sigma_bar > 0 and the
  // retained mass z exceeds 1e-12.
  TruncatedGaussian(double mu_bar, double sigma_bar, double a, double b);

  double mu_bar() const noexcept { return mu_bar_; }
  double sigma_bar() const noexcept { return sigma_bar_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double z() const noexcept { return z_; }
  double mu() const noexcept { return mu_; }
  double sigma2() const noexcept { return sigma2_; }

  // phi(mu_bar, sigma_bar^2; x) / z on [a, b], zero outside.
  double density(double x) const;

  // q x for x ~ this law: TG(q mu_bar, (q sigma_bar)^2, [q a, q b]).
  TruncatedGaussian scale(double q) const;

  // Integral of f(x) p(x) over the support. Throws Error(NoConvergence).
  double expectation(const std::function<double(double)>& f, const QuadratureOptions& options = {}) const;

  // Inverse-CDF draw on the retained mass; consumes one uniform.
  double sample(Rng& rng) const;

  // [a, b] clipped to mu_bar +- 40 sigma_bar; the density underflows beyond.
  std::pair<double, double> effective_support() const;
  std::vector<double> quadrature_breakpoints() const;

  friend bool operator==(const TruncatedGaussian&, const TruncatedGaussian&) = default;

 private:
  double mu_bar_, sigma_bar_, a_, b_;
  double alpha_, beta_, z_;
  double mu_, sigma2_;
};

// Closed-form truncated mean and variance.
MeanVariance truncated_mean_var(const TruncatedGaussian& dist);

}  // namespace stmir
