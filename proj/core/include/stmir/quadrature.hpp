#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace stmir {

struct QuadratureOptions {
  std::size_t initial_nodes = 200;  // total over all panels at the first level
  int max_doublings = 12;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
};

// Nodes and weights on [-1, 1]. Cached per order; safe to call concurrently.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(std::size_t order);

struct QuadratureResult {
  double value = 0.0;
  std::size_t evaluations = 0;  // nodes used by the accepted level
  int doublings = 0;
};

// Composite Gauss-Legendre over fixed panels. Every panel's order doubles
// until two successive totals agree to rel_tol (or abs_tol near zero).
// Throws Error(NoConvergence) after max_doublings.
QuadratureResult integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

// Breakpoints for [lo, hi] (0 <= lo < hi): geometric grading by 4 toward the
// origin, where x ln x has its branch point, then no panel wider than
// (hi - lo) / uniform_panels.
std::vector<double> graded_breakpoints(double lo, double hi, std::size_t uniform_panels = 10);

}  // namespace stmir
