#pragma once

#include <vector>

#include "stmir/quadrature.hpp"
#include "stmir/truncated_gaussian.hpp"

namespace stmir {

inline constexpr int kMaxMomentOrder = 64;

struct MomentTable {
  std::vector<double> raw;      // raw[m] = E[x^m]
  std::vector<double> central;  // central[i] = E[(x - mu)^i]
  int order = 0;
};

// L_i = E[T^i] for T standard normal truncated to [alpha, beta], via
// L_0 = 1, L_1 = -(phi(beta) - phi(alpha)) / Z,
// L_i = -(beta^{i-1} phi(beta) - alpha^{i-1} phi(alpha)) / Z + (i - 1) L_{i-2},
// solved as a two-point problem (forward sweeps lose everything once (i - 1)
// passes the squared support radius).
std::vector<double> standardized_moments(double alpha, double beta, int order);

// E[(x - center)^m] for m = 0..order. The same recursion, taken about a point
// of the support next to the center instead of about mu_bar, so parents far
// outside [a, b] do not cancel away every digit.
std::vector<double> shifted_moments(const TruncatedGaussian& dist, double center, int order);

// The same in extended precision, recomputing the retained mass from the
// parameters. Used where alternating sums of moments cancel.
std::vector<long double> shifted_moments_extended(const TruncatedGaussian& dist, long double center, int order);

// Throws Error(OrderTooHigh) if order > kMaxMomentOrder. In checked builds
// (STMIR_CHECKED) the table is cross-checked against quadrature.
MomentTable raw_moments(const TruncatedGaussian& dist, int order);

// Largest relative disagreement between the table and direct quadrature of
// x^m and (x - mu)^m (even central orders only; odd ones can vanish).
double moment_crosscheck_error(const TruncatedGaussian& dist, const MomentTable& table,
                               const QuadratureOptions& options = {});

}  // namespace stmir
