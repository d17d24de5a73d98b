#include "stmir/receptor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include "json_util.hpp"
#include "stmir/error.hpp"

namespace stmir {

namespace {

constexpr double kRowSumTol = 1e-12;

double row_scale(const Matrix& m, std::size_t i) {
  double s = 1.0;
  for (double v : m.row(i)) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

ReceptorSpec::ReceptorSpec(std::string name, std::vector<std::string> states,
                           std::vector<Transition> transitions)
    : name_(std::move(name)), states_(std::move(states)), transitions_(std::move(transitions)) {
  const std::size_t k = states_.size();
  if (k == 0) throw Error(Errc::InvalidSpec, "receptor '" + name_ + "' has no states");
  std::set<std::string> labels(states_.begin(), states_.end());
  if (labels.size() != k) throw Error(Errc::InvalidSpec, "duplicate state label");

  std::set<std::pair<std::size_t, std::size_t>> seen;
  bool any_sensitive = false;
  for (std::size_t t = 0; t < transitions_.size(); ++t) {
    const auto& tr = transitions_[t];
    const std::string where = "transition " + std::to_string(t);
    if (tr.from >= k || tr.to >= k) throw Error(Errc::InvalidSpec, where + ": state index out of range");
    if (tr.from == tr.to) throw Error(Errc::InvalidSpec, where + ": self-transition (diagonals are derived)");
    if (!std::isfinite(tr.rate) || tr.rate <= 0.0)
      throw Error(Errc::InvalidSpec, where + ": rate must be finite and > 0");
    if (!seen.emplace(tr.from, tr.to).second)
      throw Error(Errc::InvalidSpec, where + ": duplicate (from, to) pair");
    any_sensitive = any_sensitive || tr.sensitive;
  }
  if (!any_sensitive) throw Error(Errc::InvalidSpec, "receptor '" + name_ + "' has no sensitive transition");
}

std::optional<std::size_t> ReceptorSpec::find_state(std::string_view label) const {
  auto it = std::find(states_.begin(), states_.end(), label);
  if (it == states_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

ReceptorSpec ReceptorSpec::with_sensitive_rates_scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw Error(Errc::DomainError, "sensitive rate scale factor must be finite and > 0");
  auto scaled = transitions_;
  for (auto& tr : scaled)
    if (tr.sensitive) tr.rate *= factor;
  return ReceptorSpec(name_, states_, std::move(scaled));
}

ReceptorSpec chr2_skeleton(double q12, double q23, double q31) {
  return ReceptorSpec("ChR2", {"C1", "O2", "C3"},
                      {{0, 1, q12, true}, {1, 2, q23, false}, {2, 0, q31, false}});
}

namespace detail {

ReceptorSpec receptor_from_json(const json& node, const std::string& pointer) {
  if (!node.is_object()) config_error(pointer, "receptor must be an object");
  std::string name = node.contains("name") ? get_string(node, "name", pointer) : std::string("receptor");

  const json& states_node = require(node, "states", pointer);
  if (!states_node.is_array() || states_node.empty())
    config_error(pointer + "/states", "expected a non-empty array of labels");
  std::vector<std::string> states;
  for (std::size_t i = 0; i < states_node.size(); ++i) {
    if (!states_node[i].is_string()) config_error(pointer + "/states/" + std::to_string(i), "expected a string");
    states.push_back(states_node[i].get<std::string>());
    if (std::count(states.begin(), states.end(), states.back()) > 1)
      config_error(pointer + "/states/" + std::to_string(i), "duplicate label '" + states.back() + "'");
  }

  const json& trans_node = require(node, "transitions", pointer);
  if (!trans_node.is_array()) config_error(pointer + "/transitions", "expected an array");
  auto index_of = [&](const std::string& label, const std::string& where) {
    auto it = std::find(states.begin(), states.end(), label);
    if (it == states.end()) config_error(where, "unknown state '" + label + "'");
    return static_cast<std::size_t>(it - states.begin());
  };

  std::vector<Transition> transitions;
  bool any_sensitive = false;
  for (std::size_t t = 0; t < trans_node.size(); ++t) {
    const std::string p = pointer + "/transitions/" + std::to_string(t);
    const json& tr = trans_node[t];
    if (!tr.is_object()) config_error(p, "expected an object");
    Transition out;
    out.from = index_of(get_string(tr, "from", p), p + "/from");
    out.to = index_of(get_string(tr, "to", p), p + "/to");
    out.rate = get_number(tr, "rate", p);
    out.sensitive = tr.contains("sensitive") ? get_bool(tr, "sensitive", p) : false;
    if (out.from == out.to) config_error(p + "/to", "self-transition; diagonals are derived");
    if (!(out.rate > 0.0) || !std::isfinite(out.rate)) config_error(p + "/rate", "must be finite and > 0");
    for (const auto& prev : transitions)
      if (prev.from == out.from && prev.to == out.to) config_error(p, "duplicate (from, to) pair");
    any_sensitive = any_sensitive || out.sensitive;
    transitions.push_back(out);
  }
  if (!any_sensitive) config_error(pointer + "/transitions", "at least one transition must be sensitive");
  return ReceptorSpec(std::move(name), std::move(states), std::move(transitions));
}

json receptor_to_json_value(const ReceptorSpec& spec) {
  json out;
  out["name"] = spec.name();
  out["states"] = spec.states();
  out["transitions"] = json::array();
  for (const auto& tr : spec.transitions()) {
    out["transitions"].push_back({{"from", spec.states()[tr.from]},
                                  {"to", spec.states()[tr.to]},
                                  {"rate", tr.rate},
                                  {"sensitive", tr.sensitive}});
  }
  return out;
}

}  // namespace detail

ReceptorSpec parse_receptor_json(std::string_view text) {
  return detail::receptor_from_json(detail::parse_json_text(text, "receptor"), "");
}

ReceptorSpec load_receptor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "cannot open receptor file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return detail::receptor_from_json(detail::parse_json_text(buf.str(), path.string()), "");
}

std::string to_json(const ReceptorSpec& spec) { return detail::receptor_to_json_value(spec).dump(2); }

RateMatrix::RateMatrix(Matrix entries) : entries_(std::move(entries)) {
  const std::size_t k = entries_.dim();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double v = entries_(i, j);
      if (!std::isfinite(v)) throw Error(Errc::InvalidSpec, "rate matrix entry is not finite");
      if (i != j && v < 0.0) throw Error(Errc::InvalidSpec, "negative off-diagonal rate");
    }
    if (std::abs(entries_.row_sum(i)) > kRowSumTol * row_scale(entries_, i))
      throw Error(Errc::InvalidSpec, "rate matrix row " + std::to_string(i) + " does not sum to zero");
  }
}

double RateMatrix::max_exit_rate() const {
  double m = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) m = std::max(m, -entries_(i, i));
  return m;
}

TransitionMatrix::TransitionMatrix(Matrix entries, double delta_t)
    : entries_(std::move(entries)), delta_t_(delta_t) {
  if (!(delta_t >= 0.0) || !std::isfinite(delta_t))
    throw Error(Errc::DomainError, "delta_t must be finite and >= 0");
  const std::size_t k = entries_.dim();
  for (std::size_t i = 0; i < k; ++i) {
    for (double v : entries_.row(i)) {
      if (!(v >= 0.0 && v <= 1.0)) throw Error(Errc::StepTooLarge, "transition probability outside [0, 1]");
    }
    if (std::abs(entries_.row_sum(i) - 1.0) > kRowSumTol)
      throw Error(Errc::InvalidSpec, "transition matrix row " + std::to_string(i) + " does not sum to one");
  }
}

SteadyState::SteadyState(std::vector<double> probabilities) : p_(std::move(probabilities)) {
  double total = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw Error(Errc::InvalidSpec, "negative steady-state probability");
    total += v;
  }
  if (p_.empty() || std::abs(total - 1.0) > kRowSumTol)
    throw Error(Errc::InvalidSpec, "steady-state probabilities do not sum to one");
}

AffineRates affine_rates(const ReceptorSpec& spec) {
  const std::size_t k = spec.state_count();
  AffineRates out{Matrix(k), Matrix(k)};
  for (const auto& tr : spec.transitions()) {
    Matrix& m = tr.sensitive ? out.slope : out.base;
    m(tr.from, tr.to) += tr.rate;
    m(tr.from, tr.from) -= tr.rate;
  }
  return out;
}

double AffineRates::step_probability(std::size_t i, std::size_t j, double x, double delta_t) const {
  double q = rate(i, j, x) * delta_t;
  return i == j ? 1.0 + q : q;
}

RateMatrix build_rate_matrix(const ReceptorSpec& spec, double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw Error(Errc::DomainError, "intensity must be finite and >= 0");
  const std::size_t k = spec.state_count();
  Matrix q(k);
  for (const auto& tr : spec.transitions()) q(tr.from, tr.to) = tr.sensitive ? tr.rate * x : tr.rate;
  for (std::size_t i = 0; i < k; ++i) {
    double exit = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) exit += q(i, j);
    q(i, i) = -exit;
  }
  return RateMatrix(std::move(q));
}

RateMatrix mean_rate_matrix(const ReceptorSpec& spec, double mean_x) { return build_rate_matrix(spec, mean_x); }

TransitionMatrix transition_matrix(const RateMatrix& q, double delta_t) {
  if (!(delta_t >= 0.0) || !std::isfinite(delta_t))
    throw Error(Errc::DomainError, "delta_t must be finite and >= 0");
  const std::size_t k = q.dim();
  Matrix p(k);
  for (std::size_t i = 0; i < k; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      p(i, j) = q(i, j) * delta_t;
      off += p(i, j);
    }
    p(i, i) = 1.0 - off;
    if (p(i, i) < 0.0 || off > 1.0)
      throw Error(Errc::StepTooLarge, "delta_t = " + std::to_string(delta_t) + " gives a negative stay probability in row " +
                                          std::to_string(i));
  }
  return TransitionMatrix(std::move(p), delta_t);
}

bool is_strongly_connected(const Matrix& w) {
  const std::size_t k = w.dim();
  if (k == 0) return false;
  auto reaches_all = [&](bool transpose) {
    std::vector<char> seen(k, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < k; ++j) {
        double v = transpose ? w(j, i) : w(i, j);
        if (j != i && v > 0.0 && !seen[j]) {
          seen[j] = 1;
          ++count;
          stack.push_back(j);
        }
      }
    }
    return count == k;
  };
  return reaches_all(false) && reaches_all(true);
}

SteadyState steady_state(const TransitionMatrix& p_bar) {
  const std::size_t k = p_bar.dim();
  const Matrix& p = p_bar.entries();
  if (!is_strongly_connected(p)) throw Error(Errc::NotIrreducible, "transition graph is not strongly connected");

  // Balance equations pi (P - I) = 0 with the last one replaced by sum(pi) = 1.
  Eigen::MatrixXd a(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = p(i, j) - (i == j ? 1.0 : 0.0);
  a.row(static_cast<Eigen::Index>(k - 1)).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  rhs(static_cast<Eigen::Index>(k - 1)) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (lu.rank() < static_cast<Eigen::Index>(k))
    throw Error(Errc::NotIrreducible, "balance equations are singular");
  Eigen::VectorXd pi = lu.solve(rhs);
  pi += lu.solve(rhs - a * pi);  // one step of iterative refinement

  std::vector<double> out(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = std::max(0.0, pi(static_cast<Eigen::Index>(i)));
    total += out[i];
  }
  for (double& v : out) v /= total;
  return SteadyState(std::move(out));
}

SteadyState stationary_distribution(const RateMatrix& q) {
  double exit = q.max_exit_rate();
  double dt = exit > 0.0 ? 0.5 / exit : 1.0;
  return steady_state(transition_matrix(q, dt));
}

double sensitive_gain(const ReceptorSpec& spec, const SteadyState& pi) {
  if (pi.size() != spec.state_count()) throw Error(Errc::DomainError, "steady state has the wrong dimension");
  double g = 0.0;
  for (const auto& tr : spec.transitions())
    if (tr.sensitive) g += pi[tr.from] * tr.rate;
  return g / std::numbers::ln2;
}

}  // namespace stmir
