#pragma once

// Closed-form Jensen-gap bounds for f(x) = x ln x. With the normalized
// Taylor remainder h^(s)(x; mu) decreasing in x, the gap E f(x) - f(mu) is
// sandwiched between sum_{i<s} r_i + h^(s)(b; mu) mu_s and
// sum_{i<s} r_i + h^(s)(a; mu) mu_s, where r_i = mu_i f^(i)(mu) / i!.

#include "stmir/receptor.hpp"
#include "stmir/truncated_gaussian.hpp"

namespace stmir {

// h^(s)(x; mu) = (f(x) - f(mu)) / (x - mu)^s - sum_{i=1}^{s-1} f^(i)(mu) / (i! (x - mu)^(s-i))
// for s in {2, 4}. f(0) = 0 by continuity. Throws Error(DegenerateArgument)
// when |x - mu| < 1e-10 and Error(EndpointSingularity) when x < 0.
double h_s(double x, double mu, int s);

// lim_{x -> mu} h^(s)(x; mu) = f^(s)(mu) / s!.
double h_s_limit(double mu, int s);

struct GapBounds {
  double lower_nats = 0.0;
  double upper_nats = 0.0;
};

GapBounds jensen_gap_bounds(const TruncatedGaussian& dist, int s);

struct BoundPair {
  double lower = 0.0;  // bits/s
  double upper = 0.0;  // bits/s
  int s = 2;
  GapBounds gap;
};

// Gap bounds scaled by the mean-chain gain g.
BoundPair mir_bounds(const ReceptorSpec& spec, const TruncatedGaussian& dist, int s);

}  // namespace stmir
