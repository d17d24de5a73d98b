#include "stmir/bounds.hpp"

#include <cmath>

#include "stmir/error.hpp"
#include "stmir/mir.hpp"
#include "stmir/moments.hpp"

namespace stmir {

namespace {

constexpr double kDegenerateGap = 1e-10;
constexpr double kSeriesRadius = 0.1;

void check_order(int s) {
  if (s != 2 && s != 4) throw Error(Errc::DomainError, "bound order s must be 2 or 4");
}

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

// Endpoint value, falling back to the continuous extension at x = mu.
double h_at(double x, double mu, int s) {
  return std::abs(x - mu) < kDegenerateGap ? h_s_limit(mu, s) : h_s(x, mu, s);
}

}  // namespace

double h_s_limit(double mu, int s) {
  check_order(s);
  if (!(mu > 0.0)) throw Error(Errc::DomainError, "h^(s) needs mu > 0");
  return 1.0 / (static_cast<double>(s) * (s - 1) * std::pow(mu, s - 1));
}

double h_s(double x, double mu, int s) {
  check_order(s);
  if (x < 0.0) throw Error(Errc::EndpointSingularity, "x ln x is undefined for x < 0");
  if (!(mu > 0.0)) throw Error(Errc::DomainError, "h^(s) needs mu > 0");
  const double d = x - mu;
  if (std::abs(d) < kDegenerateGap) throw Error(Errc::DegenerateArgument, "|x - mu| < 1e-10; use h_s_limit");

  const double t = d / mu;
  if (std::abs(t) < kSeriesRadius) {
    // h^(s) = mu^{1-s} sum_j (-1)^j t^j / ((s + j)(s + j - 1)); the direct
    // form cancels catastrophically this close to mu.
    double sum = 0.0, power = 1.0;
    for (int j = 0; j < 40; ++j) {
      sum += (j % 2 == 0 ? power : -power) / (static_cast<double>(s + j) * (s + j - 1));
      power *= t;
    }
    return sum / std::pow(mu, s - 1);
  }

  // f'(mu) = ln mu + 1, f''(mu) = 1/mu, f'''(mu) = -1/mu^2
  const double derivs[4] = {0.0, std::log(mu) + 1.0, 1.0 / mu, -1.0 / (mu * mu)};
  const double factorial[4] = {1.0, 1.0, 2.0, 6.0};
  double value = (xlogx(x) - xlogx(mu)) / std::pow(d, s);
  for (int i = 1; i < s; ++i) value -= derivs[i] / (factorial[i] * std::pow(d, s - i));
  return value;
}

GapBounds jensen_gap_bounds(const TruncatedGaussian& dist, int s) {
  check_order(s);
  const double mu = dist.mu();
  if (s == 2) {
    // r_1 = 0 because the first central moment vanishes.
    const double var = dist.sigma2();
    return {h_at(dist.b(), mu, 2) * var, h_at(dist.a(), mu, 2) * var};
  }
  const auto central = raw_moments(dist, 4).central;
  const double base = dist.sigma2() / (2.0 * mu) - central[3] / (6.0 * mu * mu);
  return {base + h_at(dist.b(), mu, 4) * central[4], base + h_at(dist.a(), mu, 4) * central[4]};
}

BoundPair mir_bounds(const ReceptorSpec& spec, const TruncatedGaussian& dist, int s) {
  const GapBounds gap = jensen_gap_bounds(dist, s);
  const double g = mean_chain_gain(spec, dist);
  return {g * gap.lower_nats, g * gap.upper_nats, s, gap};
}

}  // namespace stmir
