#include <gtest/gtest.h>

#include <cmath>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "stmir/receptor.hpp"

namespace stmir {
namespace {

ReceptorSpec four_state(double q01, double q12, double q23, double q30, double q20) {
  return ReceptorSpec("four", {"A", "B", "C", "D"},
                      {{0, 1, q01, true}, {1, 2, q12, false}, {2, 3, q23, true}, {3, 0, q30, false},
                       {2, 0, q20, false}});
}

TEST(ReceptorSpec, RejectsMalformedTransitions) {
  EXPECT_STMIR_ERROR(ReceptorSpec("x", {"A", "B"}, {{0, 0, 1.0, true}}), Errc::InvalidSpec);
  EXPECT_STMIR_ERROR(ReceptorSpec("x", {"A", "B"}, {{0, 2, 1.0, true}}), Errc::InvalidSpec);
  EXPECT_STMIR_ERROR(ReceptorSpec("x", {"A", "B"}, {{0, 1, -1.0, true}}), Errc::InvalidSpec);
  EXPECT_STMIR_ERROR(ReceptorSpec("x", {"A", "B"}, {{0, 1, 0.0, true}}), Errc::InvalidSpec);
  EXPECT_STMIR_ERROR(ReceptorSpec("x", {"A", "B"}, {{0, 1, NAN, true}}), Errc::InvalidSpec);
  EXPECT_STMIR_ERROR(ReceptorSpec("x", {"A", "B"}, {{0, 1, 1.0, true}, {0, 1, 2.0, false}}), Errc::InvalidSpec);
  EXPECT_STMIR_ERROR(ReceptorSpec("x", {"A", "B"}, {{0, 1, 1.0, false}, {1, 0, 1.0, false}}), Errc::InvalidSpec);
}

TEST(ReceptorSpec, JsonRoundTrip) {
  const ReceptorSpec spec = chr2_skeleton(2.0, 3.5, 0.25);
  const ReceptorSpec back = parse_receptor_json(to_json(spec));
  EXPECT_EQ(back.name(), spec.name());
  EXPECT_EQ(back.states(), spec.states());
  EXPECT_EQ(back.transitions(), spec.transitions());
}

TEST(ReceptorSpec, JsonErrorsNameTheField) {
  try {
    parse_receptor_json(R"({"states": ["A", "B"], "transitions": [
        {"from": "A", "to": "B", "rate": 1, "sensitive": true},
        {"from": "B", "to": "Z", "rate": 1}]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ConfigError);
    EXPECT_NE(std::string(e.what()).find("/transitions/1/to"), std::string::npos) << e.what();
  }
  try {
    parse_receptor_json("{\"states\": [\"A\",\n  \"B\" \"C\"]}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ConfigError);
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(RateMatrix, RowsSumToZeroAndSensitiveEntriesScale) {
  const ReceptorSpec spec = chr2_skeleton(2.0, 3.0, 5.0);
  for (double x : {0.0, 0.5, 1.7}) {
    const RateMatrix q = build_rate_matrix(spec, x);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(q.entries().row_sum(i), 0.0, 1e-14);
    EXPECT_DOUBLE_EQ(q(0, 1), 2.0 * x);
    EXPECT_DOUBLE_EQ(q(1, 2), 3.0);
    EXPECT_DOUBLE_EQ(q(2, 0), 5.0);
  }
  EXPECT_STMIR_ERROR(build_rate_matrix(spec, -1.0), Errc::DomainError);
}

TEST(RateMatrix, MeanChainEqualsRateAtMeanInput) {
  const ReceptorSpec spec = four_state(1.3, 0.7, 2.1, 0.4, 0.9);
  EXPECT_EQ(mean_rate_matrix(spec, 0.8).entries(), build_rate_matrix(spec, 0.8).entries());
}

TEST(TransitionMatrix, AdmissibilityAndIdentityAtZeroStep) {
  const RateMatrix q = build_rate_matrix(chr2_skeleton(), 2.0);
  const TransitionMatrix p = transition_matrix(q, 1e-3);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(p.entries().row_sum(i), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(p(0, 0), 1.0 - 2e-3);
  EXPECT_EQ(transition_matrix(q, 0.0).entries(), Matrix::identity(3));
  EXPECT_STMIR_ERROR(transition_matrix(q, 0.6), Errc::StepTooLarge);
  EXPECT_NO_THROW(transition_matrix(q, 0.5));
}

TEST(SteadyState, ChR2UnitRatesClosedForm) {
  for (double mu : {0.1, 1.0, 1.9}) {
    const SteadyState pi = steady_state(transition_matrix(mean_rate_matrix(chr2_skeleton(), mu), 1e-3));
    EXPECT_NEAR(pi[0], 1.0 / (1.0 + 2.0 * mu), 1e-14);
    EXPECT_NEAR(pi[1], mu / (1.0 + 2.0 * mu), 1e-14);
    EXPECT_NEAR(pi[2], mu / (1.0 + 2.0 * mu), 1e-14);
  }
}

TEST(SteadyState, MatchesPowerIterationOnFourStateChain) {
  const ReceptorSpec spec = four_state(1.3, 0.7, 2.1, 0.4, 0.9);
  const TransitionMatrix p = transition_matrix(mean_rate_matrix(spec, 0.8), 0.05);
  const SteadyState pi = steady_state(p);
  const std::vector<double> ref = test::power_iteration(p.entries());
  double residual = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(pi[j], ref[j], 1e-12);
    double pj = 0.0;
    for (std::size_t i = 0; i < 4; ++i) pj += pi[i] * p(i, j);
    residual = std::max(residual, std::abs(pj - pi[j]));
  }
  EXPECT_LT(residual, 1e-15);
}

TEST(SteadyState, IndependentOfStep) {
  const ReceptorSpec spec = four_state(1.3, 0.7, 2.1, 0.4, 0.9);
  const RateMatrix q = mean_rate_matrix(spec, 0.8);
  const SteadyState a = steady_state(transition_matrix(q, 1e-4));
  const SteadyState b = stationary_distribution(q);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(a[j], b[j], 1e-13);
}

TEST(SteadyState, RejectsReducibleChains) {
  // C is absorbing once entered.
  const ReceptorSpec spec("leaky", {"A", "B", "C"}, {{0, 1, 1.0, true}, {1, 0, 1.0, false}, {1, 2, 1.0, false}});
  EXPECT_STMIR_ERROR(steady_state(transition_matrix(mean_rate_matrix(spec, 1.0), 1e-2)), Errc::NotIrreducible);
  // Light switched off: C1 -> O2 never fires.
  EXPECT_STMIR_ERROR(steady_state(transition_matrix(mean_rate_matrix(chr2_skeleton(), 0.0), 1e-2)),
                     Errc::NotIrreducible);
}

TEST(SensitiveGain, SumsOverSensitiveTransitions) {
  const ReceptorSpec spec = four_state(1.3, 0.7, 2.1, 0.4, 0.9);
  const SteadyState pi = stationary_distribution(mean_rate_matrix(spec, 0.8));
  EXPECT_NEAR(sensitive_gain(spec, pi), (pi[0] * 1.3 + pi[2] * 2.1) / std::log(2.0), 1e-15);
}

TEST(AffineRates, StepProbabilityMatchesTransitionMatrix) {
  const ReceptorSpec spec = four_state(1.3, 0.7, 2.1, 0.4, 0.9);
  const AffineRates r = affine_rates(spec);
  const TransitionMatrix p = transition_matrix(build_rate_matrix(spec, 1.4), 0.01);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(r.step_probability(i, j, 1.4, 0.01), p(i, j), 1e-16);
}

TEST(Connectivity, DetectsStrongConnectivity) {
  Matrix ring(3);
  ring(0, 1) = ring(1, 2) = ring(2, 0) = 1.0;
  EXPECT_TRUE(is_strongly_connected(ring));
  ring(2, 0) = 0.0;
  EXPECT_FALSE(is_strongly_connected(ring));
}

}  // namespace
}  // namespace stmir
