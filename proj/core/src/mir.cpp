#include "stmir/mir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stmir/error.hpp"
#include "stmir/moments.hpp"
#include "stmir/summation.hpp"

namespace stmir {

namespace {

constexpr int kRawFormCheckOrder = 20;
constexpr double kRawFormTolerance = 1e-9;

void check_admissible(const ReceptorSpec& spec, const TruncatedGaussian& dist, double delta_t) {
  if (!(delta_t > 0.0) || !std::isfinite(delta_t)) throw Error(Errc::DomainError, "delta_t must be finite and > 0");
  // Entries are affine in x, so the extremes sit at the endpoints.
  transition_matrix(build_rate_matrix(spec, dist.a()), delta_t);
  transition_matrix(build_rate_matrix(spec, dist.b()), delta_t);
}

}  // namespace

double plogp(double p, LogBase base) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::DomainError, "plogp argument outside [0, 1]");
  if (p == 0.0) return 0.0;
  return base == LogBase::Two ? p * std::log2(p) : p * std::log(p);
}

double relative_plogp_gap(double r) {
  if (r <= -1.0) return 1.0;
  if (std::abs(r) < 1e-2) {
    // sum_{n>=2} (-1)^n r^n / (n (n - 1))
    double term = r * r, sum = 0.0;
    for (int n = 2; n < 12; ++n) {
      sum += (n % 2 == 0 ? term : -term) / static_cast<double>(n * (n - 1));
      term *= r;
    }
    return sum;
  }
  return (1.0 + r) * std::log1p(r) - r;
}

std::string describe(const MirMethod& method) {
  std::ostringstream out;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DiscreteMethod>) out << "discrete(" << m.delta_t << ")";
        else if constexpr (std::is_same_v<T, QuadratureMethod>) out << "quadrature";
        else if constexpr (std::is_same_v<T, SeriesMethod>) out << "series(" << m.order << ")";
        else out << "monte_carlo(" << m.samples << ", " << m.std_error << ")";
      },
      method);
  return out.str();
}

double mean_chain_gain(const ReceptorSpec& spec, const TruncatedGaussian& dist) {
  return sensitive_gain(spec, stationary_distribution(mean_rate_matrix(spec, dist.mu())));
}

double jensen_gap_nats(const TruncatedGaussian& dist, const QuadratureOptions& options) {
  // E[x ln(x / mu) - (x - mu)]: the linear part of x ln x integrates to zero
  // against x - mu, and what remains is a nonnegative integrand.
  const double mu = dist.mu();
  return dist.expectation([mu](double x) { return mu * relative_plogp_gap((x - mu) / mu); }, options);
}

DiscreteBreakdown mir_discrete_terms(const ReceptorSpec& spec, const TruncatedGaussian& dist, double delta_t,
                                     const QuadratureOptions& options) {
  check_admissible(spec, dist, delta_t);
  const double mu = dist.mu();
  const SteadyState pi = steady_state(transition_matrix(mean_rate_matrix(spec, mu), delta_t));
  const AffineRates rates = affine_rates(spec);
  const std::size_t k = spec.state_count();

  DiscreteBreakdown out;
  out.gain = sensitive_gain(spec, pi);
  CompensatedSum total;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double slope = rates.slope(i, j);
      if (slope == 0.0) continue;
      const double pbar = rates.step_probability(i, j, mu, delta_t);
      double term = 0.0;
      if (pbar > 0.0) {
        // E[phi(p)] - phi(pbar) = pbar E[(1 + r) ln(1 + r) - r], r = (p - pbar) / pbar.
        const double step = slope * delta_t / pbar;
        term = pbar * dist.expectation([=](double x) { return relative_plogp_gap(step * (x - mu)); }, options);
      }
      const double value = pi[i] * term / delta_t / std::numbers::ln2;
      out.pairs.push_back({i, j, value});
      total += value;
    }
  }
  out.total = total.value();
  return out;
}

MirResult mir_discrete(const ReceptorSpec& spec, const TruncatedGaussian& dist, double delta_t,
                       const QuadratureOptions& options) {
  const auto terms = mir_discrete_terms(spec, dist, delta_t, options);
  return {terms.total, DiscreteMethod{delta_t}, terms.gain, terms.total / terms.gain};
}

MirResult mir_quadrature(const ReceptorSpec& spec, const TruncatedGaussian& dist, const QuadratureOptions& options) {
  const double gain = mean_chain_gain(spec, dist);
  const double gap = jensen_gap_nats(dist, options);
  return {gain * gap, QuadratureMethod{}, gain, gap};
}

double series_gap_nats(const TruncatedGaussian& dist, int order) {
  if (order < 2 || order > kMaxSeriesOrder)
    throw Error(Errc::DomainError, "series order must lie in [2, " + std::to_string(kMaxSeriesOrder) + "]");
  const auto about_one = shifted_moments(dist, 1.0, order);
  CompensatedSum sum;
  for (int k = 2; k <= order; ++k) {
    const double term = about_one[static_cast<std::size_t>(k)] / (static_cast<double>(k) * (k - 1));
    sum += (k % 2 == 0) ? term : -term;
  }
  const double mu = dist.mu();
  return (mu - 1.0) - mu * std::log(mu) + sum.value();
}

double series_gap_nats_raw_form(const TruncatedGaussian& dist, int order) {
  if (order < 2 || order > kMaxSeriesOrder)
    throw Error(Errc::DomainError, "series order must lie in [2, " + std::to_string(kMaxSeriesOrder) + "]");
  // C(k, m) E[x^m] reaches ~1e9 at k = 20 with b = 2, so the alternating
  // inner sums are carried in extended precision.
  using L = long double;
  const auto raw = shifted_moments_extended(dist, 0.0L, order);
  BasicCompensatedSum<L> outer;
  std::vector<L> binom{1};
  for (int k = 1; k <= order; ++k) {
    std::vector<L> next(static_cast<std::size_t>(k) + 1, L(1));
    for (int m = 1; m < k; ++m)
      next[static_cast<std::size_t>(m)] = binom[static_cast<std::size_t>(m - 1)] + binom[static_cast<std::size_t>(m)];
    binom = std::move(next);
    if (k < 2) continue;
    BasicCompensatedSum<L> inner;
    for (int m = 0; m <= k; ++m) {
      const L t = binom[static_cast<std::size_t>(m)] * raw[static_cast<std::size_t>(m)];
      inner += (m % 2 == 0) ? t : -t;
    }
    outer += inner.value() / (static_cast<L>(k) * (k - 1));
  }
  const double mu = dist.mu();
  return static_cast<double>(outer.value()) - mu * std::log(mu / std::numbers::e) - 1.0;
}

MirResult mir_series(const ReceptorSpec& spec, const TruncatedGaussian& dist, int order) {
  if (!(dist.a() > 0.0) || dist.b() > 2.0)
    throw Error(Errc::OutOfConvergenceRegion, "series needs 0 < a and b <= 2");
  if (order < 2 || order > kMaxSeriesOrder)
    throw Error(Errc::DomainError, "series order must lie in [2, " + std::to_string(kMaxSeriesOrder) + "]");

  const int check_order = std::min(order, kRawFormCheckOrder);
  const double central = series_gap_nats(dist, check_order);
  const double raw_form = series_gap_nats_raw_form(dist, check_order);
  if (std::abs(central - raw_form) > kRawFormTolerance)
    throw Error(Errc::NumericalMismatch, "raw-moment and central series forms differ by " +
                                             std::to_string(std::abs(central - raw_form)) + " nats");

  const double gap = order == check_order ? central : series_gap_nats(dist, order);
  const double gain = mean_chain_gain(spec, dist);
  return {gain * gap, SeriesMethod{order}, gain, gap};
}

}  // namespace stmir
