#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "expect_error.hpp"
#include "reference_values.hpp"
#include "stmir/mir.hpp"
#include "stmir/monte_carlo.hpp"

namespace stmir {
namespace {

TruncatedGaussian reference_dist() { return TruncatedGaussian(ref::kMuBar, ref::kSigmaBar, ref::kA, ref::kB); }

TEST(Simulate, SingleStepFollowsSupport) {
  const ReceptorSpec spec = chr2_skeleton();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Trajectory t = simulate(spec, reference_dist(), 0.4, 1, seed);
    ASSERT_EQ(t.size(), 1u);
    ASSERT_EQ(t.inputs.size(), 1u);
    const Matrix p = transition_matrix(build_rate_matrix(spec, t.inputs[0]), 0.4).entries();
    EXPECT_GT(p(t.initial_state, t.states[0]), 0.0);
  }
}

TEST(Simulate, DeterministicGivenSeed) {
  const Trajectory a = simulate(chr2_skeleton(), reference_dist(), 1e-3, 10000, 5);
  const Trajectory b = simulate(chr2_skeleton(), reference_dist(), 1e-3, 10000, 5);
  EXPECT_EQ(a, b);
  const Trajectory c = simulate(chr2_skeleton(), reference_dist(), 1e-3, 10000, 6);
  EXPECT_NE(a.inputs, c.inputs);
}

TEST(Simulate, PropagatesErrors) {
  EXPECT_STMIR_ERROR(simulate(chr2_skeleton(), reference_dist(), 0.6, 10, 1), Errc::StepTooLarge);
  EXPECT_STMIR_ERROR(simulate(chr2_skeleton(), reference_dist(), 1e-3, 0, 1), Errc::DomainError);
}

TEST(Simulate, OccupancyMatchesSteadyState) {
  const ReceptorSpec spec("four", {"A", "B", "C", "D"},
                          {{0, 1, 13.0, true}, {1, 2, 7.0, false}, {2, 3, 21.0, true}, {3, 0, 4.0, false},
                           {2, 0, 9.0, false}});
  const TruncatedGaussian d(0.8, 0.6, 1e-5, 2.0);
  const Trajectory t = simulate(spec, d, 1e-2, 1'000'000, 11);
  const SteadyState pi = steady_state(transition_matrix(mean_rate_matrix(spec, d.mu()), 1e-2));
  const std::vector<double> occ = empirical_occupancy(t, 4);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(occ[i], pi[i], 0.01) << i;

  // Rows of the bigram matrix estimate the mean kernel.
  const Matrix counts = bigram_counts(t, 4);
  const Matrix pbar = transition_matrix(mean_rate_matrix(spec, d.mu()), 1e-2).entries();
  for (std::size_t i = 0; i < 4; ++i) {
    const double n = counts.row_sum(i);
    ASSERT_GT(n, 0.0);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(counts(i, j) / n, pbar(i, j), 4.0 / std::sqrt(n));
  }
}

TEST(EstimateMir, AgreesWithDiscreteMir) {
  const ReceptorSpec spec = chr2_skeleton();
  const TruncatedGaussian d = reference_dist();
  const McEstimate e = estimate_mir(simulate(spec, d, 1e-3, 1'000'000, 2024), spec, d);
  EXPECT_EQ(e.n, 1'000'000u);
  EXPECT_GT(e.std_error, 0.0);
  EXPECT_NEAR(e.value, ref::mir_discrete[0], 4.0 * e.std_error);
}

TEST(EstimateMir, StandardErrorScalesWithLength) {
  const ReceptorSpec spec = chr2_skeleton();
  const TruncatedGaussian d = reference_dist();
  const Trajectory full = simulate(spec, d, 1e-3, 1'000'000, 77);
  Trajectory half = full;
  half.states.resize(500'000);
  half.inputs.resize(500'000);
  EXPECT_EQ(half, simulate(spec, d, 1e-3, 500'000, 77));
  const double ratio = estimate_mir(half, spec, d).std_error / estimate_mir(full, spec, d).std_error;
  EXPECT_GT(ratio, std::sqrt(2.0) / 1.5);
  EXPECT_LT(ratio, std::sqrt(2.0) * 1.5);
}

TEST(EstimateMir, ErrorShrinksWithLength) {
  const ReceptorSpec spec = chr2_skeleton();
  const TruncatedGaussian d = reference_dist();
  double prev = INFINITY;
  for (std::size_t n : {10'000u, 100'000u, 1'000'000u}) {
    double mean_abs = 0.0;
    for (std::uint64_t r = 0; r < 6; ++r)
      mean_abs += std::abs(estimate_mir(simulate(spec, d, 1e-3, n, derive_seed(31, r)), spec, d).value -
                           ref::mir_discrete[0]);
    mean_abs /= 6.0;
    EXPECT_LT(mean_abs, prev) << n;
    prev = mean_abs;
  }
}

TEST(EstimateMir, DegenerateInputIsNearZero) {
  const TruncatedGaussian d(1.0, 1e-8, 1e-5, 2.0);
  const McEstimate e = estimate_mir(simulate(chr2_skeleton(), d, 1e-3, 200'000, 3), chr2_skeleton(), d);
  EXPECT_LE(std::abs(e.value), 4.0 * e.std_error + 1e-12);
}

TEST(EstimateMir, FlagsImpossibleTransitions) {
  Trajectory t;
  t.delta_t = 1e-3;
  t.initial_state = 1;                           // O2
  t.states.assign(40, 1);
  t.inputs.assign(40, 1.0);
  t.states[10] = 0;                              // O2 -> C1 never happens
  EXPECT_STMIR_ERROR(estimate_mir(t, chr2_skeleton(), reference_dist()), Errc::InsufficientData);
  t.states.resize(10);
  t.inputs.resize(10);
  EXPECT_STMIR_ERROR(estimate_mir(t, chr2_skeleton(), reference_dist()), Errc::InsufficientData);
}

TEST(McGap, AgreesWithQuadrature) {
  const McEstimate g = mc_gap(reference_dist(), 2'000'000, 8);
  EXPECT_NEAR(g.value, ref::gap_nats, 4.0 * g.std_error);
  EXPECT_GT(g.std_error, 0.0);
}

TEST(McGap, DegenerateAndScaleIdentity) {
  const TruncatedGaussian d(1.0, 1e-9, 1e-5, 2.0);
  const McEstimate g = mc_gap(d, 100'000, 4);
  EXPECT_LE(std::abs(g.value), 4.0 * g.std_error + 1e-15);
  const McEstimate a = mc_gap(reference_dist(), 10'000, 9);
  const McEstimate b = mc_gap(reference_dist().scale(1.0), 10'000, 9);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(mc_gap(d, 1, 1).std_error, 0.0);
}

TEST(TrajectoryDump, TabSeparatedWithHeader) {
  const Trajectory t = simulate(chr2_skeleton(), reference_dist(), 1e-3, 3, 1);
  std::ostringstream out;
  write_trajectory_tsv(out, t);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "step\tx\ty");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 2);
    EXPECT_EQ(line.substr(0, line.find('\t')), std::to_string(rows));
  }
  EXPECT_EQ(rows, 3);
}

}  // namespace
}  // namespace stmir
