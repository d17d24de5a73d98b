#include "stmir/monte_carlo.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "stmir/format.hpp"
#include "stmir/error.hpp"

namespace stmir {

namespace {

struct RowEntry {
  std::uint32_t to;
  double base;
  double slope;
};

}  // namespace

Trajectory simulate(const ReceptorSpec& spec, const TruncatedGaussian& dist, double delta_t, std::size_t n,
                    std::uint64_t seed) {
  if (n == 0) throw Error(Errc::DomainError, "trajectory length must be >= 1");
  if (!(delta_t > 0.0)) throw Error(Errc::DomainError, "delta_t must be > 0");
  transition_matrix(build_rate_matrix(spec, dist.a()), delta_t);
  transition_matrix(build_rate_matrix(spec, dist.b()), delta_t);

  const std::size_t k = spec.state_count();
  const SteadyState pi = steady_state(transition_matrix(mean_rate_matrix(spec, dist.mu()), delta_t));
  const AffineRates rates = affine_rates(spec);
  std::vector<std::vector<RowEntry>> rows(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (j != i && (rates.base(i, j) != 0.0 || rates.slope(i, j) != 0.0))
        rows[i].push_back({static_cast<std::uint32_t>(j), rates.base(i, j), rates.slope(i, j)});

  Rng rng(seed);
  Trajectory traj;
  traj.delta_t = delta_t;
  traj.seed = seed;
  traj.states.resize(n);
  traj.inputs.resize(n);

  {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t y0 = k - 1;
    for (std::size_t i = 0; i < k; ++i) {
      acc += pi[i];
      if (u < acc) {
        y0 = i;
        break;
      }
    }
    traj.initial_state = y0;
  }

  auto y = static_cast<std::uint32_t>(traj.initial_state);
  for (std::size_t step = 0; step < n; ++step) {
    const double x = dist.sample(rng);
    const double u = rng.uniform();
    double acc = 0.0;
    std::uint32_t next = y;  // stay unless an exit fires
    for (const auto& e : rows[y]) {
      acc += (e.base + x * e.slope) * delta_t;
      if (u < acc) {
        next = e.to;
        break;
      }
    }
    y = next;
    traj.inputs[step] = x;
    traj.states[step] = y;
  }
  return traj;
}

McEstimate estimate_mir(const Trajectory& traj, const ReceptorSpec& spec, const TruncatedGaussian& dist,
                        std::size_t batches) {
  const std::size_t n = traj.size();
  if (batches < 2) throw Error(Errc::DomainError, "need at least two batches");
  if (n < batches) throw Error(Errc::InsufficientData, "trajectory shorter than the batch count");
  const std::size_t k = spec.state_count();
  const double mu = dist.mu();
  const double dt = traj.delta_t;
  const AffineRates rates = affine_rates(spec);

  Matrix pbar(k), step(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      pbar(i, j) = rates.step_probability(i, j, mu, dt);
      step(i, j) = pbar(i, j) > 0.0 ? rates.slope(i, j) * dt / pbar(i, j) : 0.0;
    }

  const std::size_t per_batch = n / batches;
  std::vector<double> batch_sum(batches, 0.0);
  double total = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = traj.state_before(t), j = traj.states[t];
    if (!(pbar(i, j) > 0.0))
      throw Error(Errc::InsufficientData, "observed transition " + std::to_string(i) + "->" + std::to_string(j) +
                                              " has zero probability under the mean chain");
    // log p(x)/pbar = log1p(slope (x - mu) dt / pbar)
    const double term = std::log1p(step(i, j) * (traj.inputs[t] - mu)) / std::numbers::ln2;
    total += term;
    const std::size_t b = t / per_batch;
    if (b < batches) batch_sum[b] += term;
  }

  double mean_of_batches = 0.0;
  for (double& s : batch_sum) {
    s /= static_cast<double>(per_batch);
    mean_of_batches += s;
  }
  mean_of_batches /= static_cast<double>(batches);
  double ss = 0.0;
  for (double s : batch_sum) ss += (s - mean_of_batches) * (s - mean_of_batches);
  const double batch_var = ss / static_cast<double>(batches - 1);

  return {total / static_cast<double>(n) / dt, std::sqrt(batch_var / static_cast<double>(batches)) / dt, n};
}

McEstimate mc_gap(const TruncatedGaussian& dist, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(Errc::DomainError, "sample count must be >= 1");
  Rng rng(seed);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = dist.sample(rng);
    const double v = x == 0.0 ? 0.0 : x * std::log(x);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (v - mean);
  }
  const double mu = dist.mu();
  const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  return {mean - mu * std::log(mu), std::sqrt(var / static_cast<double>(n)), n};
}

std::vector<double> empirical_occupancy(const Trajectory& traj, std::size_t state_count) {
  std::vector<double> occ(state_count, 0.0);
  for (auto s : traj.states) occ.at(s) += 1.0;
  for (double& v : occ) v /= static_cast<double>(traj.size());
  return occ;
}

Matrix bigram_counts(const Trajectory& traj, std::size_t state_count) {
  Matrix counts(state_count);
  for (std::size_t t = 0; t < traj.size(); ++t) counts(traj.state_before(t), traj.states[t]) += 1.0;
  return counts;
}

void write_trajectory_tsv(std::ostream& out, const Trajectory& traj) {
  out << "step\tx\ty\n";
  for (std::size_t t = 0; t < traj.size(); ++t)
    out << (t + 1) << '\t' << format_double(traj.inputs[t]) << '\t' << traj.states[t] << '\n';
}

}  // namespace stmir
