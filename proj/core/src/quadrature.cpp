#include "stmir/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "stmir/error.hpp"

namespace stmir {

namespace {

GaussLegendreRule compute_rule(std::size_t n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
                    static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 - (static_cast<double>(k) - 1.0) * p0) /
                  static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    if (n == 1) p0 = 1.0;
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double apply(const std::function<double(double)>& f, std::span<const double> bp, const GaussLegendreRule& rule) {
  // Neumaier-compensated total over panels.
  double sum = 0.0, comp = 0.0;
  for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
    const double half = 0.5 * (bp[p + 1] - bp[p]);
    const double mid = 0.5 * (bp[p + 1] + bp[p]);
    double panel = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
    panel *= half;
    double t = sum + panel;
    comp += std::abs(sum) >= std::abs(panel) ? (sum - t) + panel : (panel - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(std::size_t order) {
  if (order == 0) throw Error(Errc::DomainError, "Gauss-Legendre order must be >= 1");
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<const GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<const GaussLegendreRule>(compute_rule(order));
  return *slot;
}

QuadratureResult integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options) {
  if (breakpoints.size() < 2) throw Error(Errc::DomainError, "need at least one panel");
  const std::size_t panels = breakpoints.size() - 1;
  std::size_t order = std::max<std::size_t>(8, (options.initial_nodes + panels - 1) / panels);

  double previous = apply(f, breakpoints, gauss_legendre(order));
  for (int level = 1; level <= options.max_doublings; ++level) {
    order *= 2;
    double current = apply(f, breakpoints, gauss_legendre(order));
    if (!std::isfinite(current)) throw Error(Errc::NoConvergence, "integrand produced a non-finite value");
    double diff = std::abs(current - previous);
    if (diff <= options.rel_tol * std::abs(current) || diff <= options.abs_tol)
      return {current, order * panels, level};
    previous = current;
  }
  throw Error(Errc::NoConvergence, "quadrature did not converge after " + std::to_string(options.max_doublings) +
                                       " doublings");
}

std::vector<double> graded_breakpoints(double lo, double hi, std::size_t uniform_panels) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi))
    throw Error(Errc::DomainError, "graded_breakpoints needs 0 <= lo < hi");
  std::vector<double> coarse{hi};
  const double floor_point = hi * 1e-15;
  for (double t = hi / 4.0; t > lo && t > floor_point; t /= 4.0) coarse.push_back(t);
  coarse.push_back(lo);
  std::reverse(coarse.begin(), coarse.end());

  const double max_width = (hi - lo) / static_cast<double>(std::max<std::size_t>(1, uniform_panels));
  std::vector<double> out{coarse.front()};
  for (std::size_t p = 0; p + 1 < coarse.size(); ++p) {
    const double w = coarse[p + 1] - coarse[p];
    const auto pieces = static_cast<std::size_t>(std::ceil(w / max_width - 1e-9));
    for (std::size_t s = 1; s < pieces; ++s) out.push_back(coarse[p] + w * static_cast<double>(s) / static_cast<double>(pieces));
    out.push_back(coarse[p + 1]);
  }
  return out;
}

}  // namespace stmir
