#pragma once

// Mutual information rate (bits/s) of a receptor channel driven by IID
// truncated-Gaussian intensities: finite-step discrete form, the exact
// continuous-time limit, and the series approximation of that limit.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "stmir/quadrature.hpp"
#include "stmir/receptor.hpp"
#include "stmir/truncated_gaussian.hpp"

namespace stmir {

enum class LogBase { Two, Natural };

// 0 at p = 0, p log p otherwise. Throws Error(DomainError) outside [0, 1].
double plogp(double p, LogBase base = LogBase::Two);

// (1 + r) ln(1 + r) - r for r >= -1: the Bregman remainder of p ln p at
// p = pbar, divided by pbar, with r = (p - pbar) / pbar. Nonnegative.
double relative_plogp_gap(double r);

struct DiscreteMethod {
  double delta_t;
};
struct QuadratureMethod {};
struct SeriesMethod {
  int order;
};
struct MonteCarloMethod {
  std::size_t samples;
  double std_error;
};
using MirMethod = std::variant<DiscreteMethod, QuadratureMethod, SeriesMethod, MonteCarloMethod>;

std::string describe(const MirMethod& method);

struct MirResult {
  double value = 0.0;  // bits/s
  MirMethod method = QuadratureMethod{};
  double gain = 0.0;      // g, bits/s per nat of gap
  double gap_nats = 0.0;  // E[x ln x] - mu ln mu; for discrete, value / gain
};

struct PairContribution {
  std::size_t from;
  std::size_t to;
  double value;  // bits/s
};

struct DiscreteBreakdown {
  std::vector<PairContribution> pairs;  // every x-dependent (from, to), diagonals included
  double total = 0.0;
  double gain = 0.0;
};

// g evaluated at the stationary law of the mean chain E[Q] = Q(mu).
double mean_chain_gain(const ReceptorSpec& spec, const TruncatedGaussian& dist);

// E[x ln x] - mu ln mu by quadrature, in nats.
double jensen_gap_nats(const TruncatedGaussian& dist, const QuadratureOptions& options = {});

// (1/dt) sum over x-dependent pairs of pi_from (E[phi(p(x))] - phi(E[p(x)])).
// Throws Error(StepTooLarge) when dt is not admissible at x = a or x = b.
DiscreteBreakdown mir_discrete_terms(const ReceptorSpec& spec, const TruncatedGaussian& dist, double delta_t,
                                     const QuadratureOptions& options = {});
MirResult mir_discrete(const ReceptorSpec& spec, const TruncatedGaussian& dist, double delta_t,
                       const QuadratureOptions& options = {});

// Continuous-time limit g (E[x ln x] - mu ln mu).
MirResult mir_quadrature(const ReceptorSpec& spec, const TruncatedGaussian& dist,
                         const QuadratureOptions& options = {});

inline constexpr int kMaxSeriesOrder = 64;

// mu - 1 - mu ln mu + sum_{k=2}^{order} (-1)^k E[(x - 1)^k] / (k (k - 1)).
double series_gap_nats(const TruncatedGaussian& dist, int order);
// Same partial sum written over raw moments:
// sum_k sum_m (-1)^m C(k, m) E[x^m] / (k (k - 1)) - mu ln(mu / e) - 1.
double series_gap_nats_raw_form(const TruncatedGaussian& dist, int order);

// Series approximation truncated at `order`. Requires 0 < a and b <= 2
// (Error(OutOfConvergenceRegion)) and 2 <= order <= 64. The raw-moment form
// is evaluated up to order min(order, 20) and must agree with the central
// form within 1e-9 nats, else Error(NumericalMismatch).
MirResult mir_series(const ReceptorSpec& spec, const TruncatedGaussian& dist, int order);

}  // namespace stmir
