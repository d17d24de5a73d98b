#pragma once

// Sample-path verification: simulate the receptor under IID sampled
// intensities and estimate the MIR from the path.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "stmir/matrix.hpp"
#include "stmir/receptor.hpp"
#include "stmir/truncated_gaussian.hpp"

namespace stmir {

struct Trajectory {
  double delta_t = 0.0;
  std::size_t initial_state = 0;     // y_0, drawn from the stationary law
  std::vector<std::uint32_t> states;  // y_1 .. y_n
  std::vector<double> inputs;         // x_1 .. x_n
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return states.size(); }
  std::size_t state_before(std::size_t step) const { return step == 0 ? initial_state : states[step - 1]; }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

// y_0 ~ pi of the mean chain; then x_i ~ dist and y_i ~ row y_{i-1} of
// I + Q(x_i) dt. Each step consumes exactly two uniforms from Rng(seed).
Trajectory simulate(const ReceptorSpec& spec, const TruncatedGaussian& dist, double delta_t, std::size_t n,
                    std::uint64_t seed);

// (1/(n dt)) sum_i log2(p_{y_{i-1} y_i}(x_i) / pbar_{y_{i-1} y_i}), with a
// batch-means standard error. Throws Error(InsufficientData) when a visited
// bigram has zero probability under the mean chain or n < batches.
McEstimate estimate_mir(const Trajectory& traj, const ReceptorSpec& spec, const TruncatedGaussian& dist,
                        std::size_t batches = 20);

// Mean of x ln x over n draws minus the analytic mu ln mu, in nats.
McEstimate mc_gap(const TruncatedGaussian& dist, std::size_t n, std::uint64_t seed);

// Fraction of steps 1..n spent in each state.
std::vector<double> empirical_occupancy(const Trajectory& traj, std::size_t state_count);

// counts(i, j) = number of steps with y_{t-1} = i and y_t = j.
Matrix bigram_counts(const Trajectory& traj, std::size_t state_count);

// Tab-separated "step\tx\ty" with a header; y is the 0-based state index.
void write_trajectory_tsv(std::ostream& out, const Trajectory& traj);

}  // namespace stmir
