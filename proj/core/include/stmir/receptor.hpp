#pragma once

// Receptor as a finite-state continuous-time Markov chain whose
// intensity-sensitive transitions scale linearly with the input x.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stmir/matrix.hpp"

namespace stmir {

struct Transition {
  std::size_t from = 0;
  std::size_t to = 0;
  double rate = 0.0;  // 1/s, or 1/(s * intensity unit) when sensitive
  bool sensitive = false;

  friend bool operator==(const Transition&, const Transition&) = default;
};

class ReceptorSpec {
 public:
  // Throws Error(InvalidSpec) unless: from != to, indices in range, rates
  // finite and > 0, at most one transition per (from, to), and at least one
  // sensitive transition.
  ReceptorSpec(std::string name, std::vector<std::string> states,
               std::vector<Transition> transitions);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }
  std::size_t state_count() const noexcept { return states_.size(); }

  std::optional<std::size_t> find_state(std::string_view label) const;

  // Copy with every sensitive rate multiplied by `factor` (> 0).
  ReceptorSpec with_sensitive_rates_scaled(double factor) const;

 private:
  std::string name_;
  std::vector<std::string> states_;
  std::vector<Transition> transitions_;
};

// ChR2 three-state ring C1 -> O2 -> C3 -> C1 with C1 -> O2 light-sensitive.
ReceptorSpec chr2_skeleton(double q12 = 1.0, double q23 = 1.0, double q31 = 1.0);

// {"name": str, "states": [str], "transitions":
//   [{"from": str, "to": str, "rate": float, "sensitive": bool}]}
// Errors carry the offending JSON pointer, e.g. "/transitions/1/to".
ReceptorSpec parse_receptor_json(std::string_view text);
ReceptorSpec load_receptor(const std::filesystem::path& path);
std::string to_json(const ReceptorSpec& spec);

// CTMC generator. Off-diagonals >= 0, rows sum to zero.
class RateMatrix {
 public:
  explicit RateMatrix(Matrix entries);

  const Matrix& entries() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return entries_.dim(); }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  double max_exit_rate() const;

 private:
  Matrix entries_;
};

// One-step kernel P = I + Q dt. Entries in [0, 1], rows sum to one.
class TransitionMatrix {
 public:
  TransitionMatrix(Matrix entries, double delta_t);

  const Matrix& entries() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return entries_.dim(); }
  double delta_t() const noexcept { return delta_t_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

 private:
  Matrix entries_;
  double delta_t_;
};

class SteadyState {
 public:
  explicit SteadyState(std::vector<double> probabilities);

  const std::vector<double>& probabilities() const noexcept { return p_; }
  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

 private:
  std::vector<double> p_;
};

// Q(x): sensitive entries rate * x, insensitive entries rate, diagonal
// derived so rows sum to zero. x must be >= 0.
RateMatrix build_rate_matrix(const ReceptorSpec& spec, double x);

// E[Q] for an IID input with mean `mean_x`. Same as build_rate_matrix
// because every sensitive entry is linear in x.
RateMatrix mean_rate_matrix(const ReceptorSpec& spec, double mean_x);

// Throws Error(StepTooLarge) when an entry of I + Q dt leaves [0, 1].
TransitionMatrix transition_matrix(const RateMatrix& q, double delta_t);

// Unique pi with pi P = pi, sum(pi) = 1. Throws Error(NotIrreducible) when
// the positive-entry transition graph is not strongly connected.
SteadyState steady_state(const TransitionMatrix& p_bar);

// Stationary law of a generator; uniformizes with an admissible step
// internally (pi does not depend on dt).
SteadyState stationary_distribution(const RateMatrix& q);

// g = sum over sensitive off-diagonal transitions of pi_from * rate / ln 2.
double sensitive_gain(const ReceptorSpec& spec, const SteadyState& pi);

// Q(x) = base + x * slope, diagonals included. The hot paths (discrete MIR
// integrands, trajectory sampling) evaluate rows of this directly.
struct AffineRates {
  Matrix base;
  Matrix slope;

  double rate(std::size_t i, std::size_t j, double x) const { return base(i, j) + x * slope(i, j); }
  // Row i of I + Q(x) dt, entry j.
  double step_probability(std::size_t i, std::size_t j, double x, double delta_t) const;
};

AffineRates affine_rates(const ReceptorSpec& spec);

bool is_strongly_connected(const Matrix& adjacency_weights);

}  // namespace stmir
