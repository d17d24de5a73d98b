#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "reference_values.hpp"
#include "stmir/bounds.hpp"
#include "stmir/mir.hpp"

namespace stmir {
namespace {

double xlnx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

TEST(HFunction, MatchesDefinitionAwayFromMean) {
  const double mu = 0.9;
  for (double x : {1e-5, 0.3, 0.7, 1.2, 2.0}) {
    const double d = x - mu;
    const double h2 = (xlnx(x) - xlnx(mu) - (1 + std::log(mu)) * d) / (d * d);
    EXPECT_NEAR(h_s(x, mu, 2), h2, 1e-13 * h2) << x;
    const double h4 = (xlnx(x) - xlnx(mu) - (1 + std::log(mu)) * d - d * d / (2 * mu) + d * d * d / (6 * mu * mu)) /
                      (d * d * d * d);
    EXPECT_NEAR(h_s(x, mu, 4), h4, 1e-9 * std::abs(h4)) << x;
  }
  EXPECT_NEAR(h_s(0.0, mu, 2), (-xlnx(mu) + (1 + std::log(mu)) * mu) / (mu * mu), 1e-15);
}

TEST(HFunction, ContinuousAcrossSeriesSwitchAndLimit) {
  const double mu = 1.3;
  for (int s : {2, 4}) {
    const double t = 0.1 * mu;
    EXPECT_NEAR(h_s(mu + t * (1 - 1e-12), mu, s), h_s(mu + t * (1 + 1e-12), mu, s), 1e-9);
    EXPECT_NEAR(h_s(mu + 1e-8, mu, s), h_s_limit(mu, s), 1e-7);
  }
  EXPECT_DOUBLE_EQ(h_s_limit(mu, 2), 1.0 / (2.0 * mu));
  EXPECT_DOUBLE_EQ(h_s_limit(mu, 4), 1.0 / (12.0 * mu * mu * mu));
}

TEST(HFunction, DecreasingInX) {
  for (int s : {2, 4}) {
    double prev = INFINITY;
    for (double x = 0.0; x <= 3.0; x += 0.013) {
      if (std::abs(x - 1.0) < 1e-9) continue;
      const double h = h_s(x, 1.0, s);
      EXPECT_LT(h, prev) << "s=" << s << " x=" << x;
      prev = h;
    }
  }
}

TEST(HFunction, Errors) {
  EXPECT_STMIR_ERROR(h_s(1.0, 1.0, 2), Errc::DegenerateArgument);
  EXPECT_STMIR_ERROR(h_s(1.0 + 1e-11, 1.0, 2), Errc::DegenerateArgument);
  EXPECT_STMIR_ERROR(h_s(-0.1, 1.0, 2), Errc::EndpointSingularity);
  EXPECT_STMIR_ERROR(h_s(0.5, 1.0, 3), Errc::DomainError);
}

TEST(GapBounds, ReferenceValues) {
  const TruncatedGaussian d(ref::kMuBar, ref::kSigmaBar, ref::kA, ref::kB);
  const GapBounds b2 = jensen_gap_bounds(d, 2);
  EXPECT_NEAR(b2.lower_nats, ref::gap_lower_s2, 1e-15);
  EXPECT_NEAR(b2.upper_nats, ref::gap_upper_s2, 1e-15);
  const GapBounds b4 = jensen_gap_bounds(d, 4);
  EXPECT_NEAR(b4.lower_nats, ref::gap_lower_s4, 1e-14);
  EXPECT_NEAR(b4.upper_nats, ref::gap_upper_s4, 1e-14);
  const BoundPair p = mir_bounds(chr2_skeleton(), d, 4);
  EXPECT_NEAR(p.lower, ref::gain * ref::gap_lower_s4, 1e-14);
  EXPECT_NEAR(p.upper, ref::gain * ref::gap_upper_s4, 1e-14);
  EXPECT_EQ(p.s, 4);
}

TEST(GapBounds, SandwichRandomDistributions) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> mu_d(0.05, 2.5), sig_d(0.02, 2.0), a_d(0.0, 0.3);
  for (int i = 0; i < 200;) {
    const double mu_bar = mu_d(gen), sigma_bar = sig_d(gen), a = a_d(gen);
    if (test::ReferenceTruncatedGaussian{mu_bar, sigma_bar, a, 2.0}.mass() < 1e-9) continue;
    ++i;
    const TruncatedGaussian d(mu_bar, sigma_bar, a, 2.0);
    const double gap = jensen_gap_nats(d);
    for (int s : {2, 4}) {
      const GapBounds b = jensen_gap_bounds(d, s);
      EXPECT_LE(b.lower_nats, gap + 1e-12) << "s=" << s << " mu_bar=" << d.mu_bar() << " sigma_bar=" << d.sigma_bar();
      EXPECT_GE(b.upper_nats, gap - 1e-12) << "s=" << s << " mu_bar=" << d.mu_bar() << " sigma_bar=" << d.sigma_bar();
    }
  }
}

TEST(GapBounds, DegenerateWidthCollapses) {
  const TruncatedGaussian d(1.0, 1e-8, 1e-5, 2.0);
  for (int s : {2, 4}) {
    const BoundPair b = mir_bounds(chr2_skeleton(), d, s);
    EXPECT_LT(std::abs(b.lower), 1e-8);
    EXPECT_LT(std::abs(b.upper), 1e-8);
  }
}

}  // namespace
}  // namespace stmir
