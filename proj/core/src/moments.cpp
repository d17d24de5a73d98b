#include "stmir/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "stmir/error.hpp"
#include "stmir/summation.hpp"

namespace stmir {

namespace {

// Clip point for long supports. The clip acts as a real truncation, boundary
// term included; phi(30) ~ 1e-196 still fits in a double.
constexpr double kSupportRadiusCap = 30.0;

template <class Real>
Real normal_pdf(Real t) {
  return std::exp(-t * t / 2) / std::sqrt(2 * std::numbers::pi_v<Real>);
}

// Phi(beta) - Phi(alpha), taken on the side that avoids cancellation.
template <class Real>
Real normal_interval_mass(Real alpha, Real beta) {
  const Real s = std::numbers::sqrt2_v<Real>;
  if (alpha >= 0) return (std::erfc(alpha / s) - std::erfc(beta / s)) / 2;
  if (beta <= 0) return (std::erfc(-beta / s) - std::erfc(-alpha / s)) / 2;
  return 1 - (std::erfc(-alpha / s) + std::erfc(beta / s)) / 2;
}

// Tridiagonal solve with partial pivoting. dl[i] sits at (i + 1, i), du[i] at
// (i, i + 1); all inputs are overwritten and the solution is left in rhs.
template <class Real>
void solve_tridiagonal(std::vector<Real>& dl, std::vector<Real>& d, std::vector<Real>& du, std::vector<Real>& rhs) {
  const std::size_t n = d.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      const Real f = dl[i] / d[i];
      d[i + 1] -= f * du[i];
      rhs[i + 1] -= f * rhs[i];
      dl[i] = 0;  // dl now holds the second superdiagonal
    } else {
      const Real f = d[i] / dl[i];
      d[i] = dl[i];
      const Real t = d[i + 1];
      d[i + 1] = du[i] - f * t;
      if (i + 2 < n) {
        dl[i] = du[i + 1];
        du[i + 1] = -f * dl[i];
      } else {
        dl[i] = 0;
      }
      du[i] = t;
      const Real r = rhs[i];
      rhs[i] = rhs[i + 1];
      rhs[i + 1] = r - f * rhs[i];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    Real v = rhs[k];
    if (k + 1 < n) v -= du[k] * rhs[k + 1];
    if (k + 2 < n) v -= dl[k] * rhs[k + 2];
    rhs[k] = v / d[k];
  }
}

// Moments of v on [0, w] under the weight phi(v + delta) / z, returned as
// k_i = E[v^i] / w^i together with the piece mass z = Phi(w + delta) - Phi(delta).
// Parts integration gives
//   K_i = (i - 1) K_{i-2} - delta K_{i-1} - (w^{i-1} phi(w + delta) - [i = 1] phi(delta)) / z,
// the L_i recursion taken about the edge v = 0 instead of the parent mean.
// Homogeneous solutions grow like the saddle points u+ = (-delta + r) / 2 and
// |u-| = (delta + r) / 2, r = sqrt(delta^2 + 4 i); K_i itself grows like
// min(w, u+). That splits the indices into a forward band (delta < 0 and
// u+ <= w), a backward band (|u-| >= w, or any i when delta >= 0) and a
// mixed band between them, solved as a two-point problem.
template <class Real>
struct EdgeMoments {
  std::vector<Real> k;
  Real z;
};

template <class Real>
EdgeMoments<Real> edge_moments(Real w, Real delta, int order) {
  const Real z = normal_interval_mass(delta, w + delta);
  const Real w2 = w * w, dw = delta / w;
  const Real far = normal_pdf(w + delta) / (w * z);
  const Real near = normal_pdf(delta) / (w * z);
  auto boundary = [&](int i) { return i == 1 ? far - near : far; };

  const double wd = static_cast<double>(w), dd = static_cast<double>(delta);
  const double spread = wd * std::abs(dd);
  const int forward_end =
      dd < 0.0 ? std::max(0, static_cast<int>(std::floor(std::min<double>(order, wd * wd - spread)))) : 0;

  EdgeMoments<Real> out{std::vector<Real>(static_cast<std::size_t>(order) + 1, 0), z};
  auto& k = out.k;
  k[0] = 1;
  if (order >= 1 && forward_end >= 1) k[1] = -dw - boundary(1);
  for (int i = 2; i <= forward_end; ++i)
    k[static_cast<std::size_t>(i)] =
        static_cast<Real>(i - 1) / w2 * k[static_cast<std::size_t>(i - 2)] - dw * k[static_cast<std::size_t>(i - 1)] - boundary(i);
  if (forward_end >= order) return out;

  const int backward_start =
      dd < 0.0 ? std::max(forward_end + 1, static_cast<int>(std::ceil(wd * wd + spread))) : forward_end + 1;

  // Backward sweep from zeros placed where the homogeneous solutions have
  // outgrown K_i by a factor of ~1/eps * e^55.
  const double target = -std::log(std::numeric_limits<Real>::epsilon()) + 55.0;
  int n = std::max(order, backward_start) + 1;
  for (double damping = 0.0; damping < target && n < 1000000; ++n) {
    const double root = std::sqrt(dd * dd + 4.0 * n);
    const double slow = std::min(-dd + root, dd + root) / 2.0;
    const double own = std::min(wd, (-dd + root) / 2.0);
    damping += std::log(slow / own);
  }
  std::vector<Real> tail(static_cast<std::size_t>(n) + 3, 0);
  for (int i = n + 2; i >= backward_start + 2; --i) {
    const auto u = static_cast<std::size_t>(i);
    tail[u - 2] = (tail[u] + dw * tail[u - 1] + boundary(i)) * w2 / static_cast<Real>(i - 1);
  }
  for (int i = backward_start; i <= order; ++i) k[static_cast<std::size_t>(i)] = tail[static_cast<std::size_t>(i)];

  // Mixed band: unknowns k_{left+1} .. k_{right-1} between the last forward
  // value and the first backward one.
  const int left = forward_end, right = backward_start;
  const int count = right - left - 1;
  if (count > 0) {
    const auto uc = static_cast<std::size_t>(count);
    std::vector<Real> dl(uc, 0), d(uc, dw), du(uc, 1), rhs(uc);
    for (int r = 0; r < count; ++r) {
      const int i = left + 2 + r;
      const Real sub = -static_cast<Real>(i - 1) / w2;
      rhs[static_cast<std::size_t>(r)] = -boundary(i);
      if (r == 0) rhs[0] -= sub * k[static_cast<std::size_t>(left)];
      else dl[static_cast<std::size_t>(r - 1)] = sub;
      if (r == count - 1) rhs[static_cast<std::size_t>(r)] -= tail[static_cast<std::size_t>(right)];
    }
    solve_tridiagonal(dl, d, du, rhs);
    for (int r = 0; r < count && left + 1 + r <= order; ++r)
      k[static_cast<std::size_t>(left + 1 + r)] = rhs[static_cast<std::size_t>(r)];
  }
  return out;
}

// E[(x - center)^m], m = 0..order, for x ~ N(mu_bar, sigma_bar^2) on [a, b].
// The support is split at the center (or anchored at the nearer edge when the
// center lies outside), so every piece is one-sided and its moments are sums
// of same-signed terms.
template <class Real>
std::vector<Real> moments_about(Real mu_bar, Real sigma_bar, Real a, Real b, Real center, int order) {
  const Real cap = kSupportRadiusCap;
  const Real lo = std::max(a, mu_bar - cap * sigma_bar);
  const Real hi = std::min(b, mu_bar + cap * sigma_bar);

  struct Piece {
    Real anchor, sign, width, delta;
  };
  std::vector<Piece> pieces;
  if (center <= lo) {
    pieces.push_back({lo, 1, (hi - lo) / sigma_bar, (lo - mu_bar) / sigma_bar});
  } else if (center >= hi) {
    pieces.push_back({hi, -1, (hi - lo) / sigma_bar, (mu_bar - hi) / sigma_bar});
  } else {
    pieces.push_back({center, 1, (hi - center) / sigma_bar, (center - mu_bar) / sigma_bar});
    pieces.push_back({center, -1, (center - lo) / sigma_bar, (mu_bar - center) / sigma_bar});
  }

  std::vector<BasicCompensatedSum<Real>> sums(static_cast<std::size_t>(order) + 1);
  Real total = 0;
  for (const Piece& p : pieces) {
    const auto e = edge_moments(p.width, p.delta, order);
    if (!(e.z > 0)) continue;
    total += e.z;
    const Real step = p.sign * sigma_bar * p.width;  // sigma_bar^i E[u^i] = step^i k_i
    const Real shift = p.anchor - center;
    Real step_pow = 1;
    for (int m = 0; m <= order; ++m, step_pow *= step) {
      if (shift == 0) {
        sums[static_cast<std::size_t>(m)] += e.z * step_pow * e.k[static_cast<std::size_t>(m)];
        continue;
      }
      Real coeff = 1, sp = 1;
      for (int i = 0; i <= m; ++i, sp *= step) {
        sums[static_cast<std::size_t>(m)] += e.z * coeff * std::pow(shift, m - i) * sp * e.k[static_cast<std::size_t>(i)];
        coeff = coeff * static_cast<Real>(m - i) / static_cast<Real>(i + 1);
      }
    }
  }
  std::vector<Real> out(static_cast<std::size_t>(order) + 1);
  for (int m = 0; m <= order; ++m) out[static_cast<std::size_t>(m)] = sums[static_cast<std::size_t>(m)].value() / total;
  out[0] = 1;
  return out;
}

void check_order(int order) {
  if (order < 0) throw Error(Errc::DomainError, "moment order must be >= 0");
  if (order > kMaxMomentOrder)
    throw Error(Errc::OrderTooHigh, "moment order " + std::to_string(order) + " exceeds " +
                                        std::to_string(kMaxMomentOrder));
}

}  // namespace

std::vector<double> standardized_moments(double alpha, double beta, int order) {
  check_order(order);
  if (!(alpha < beta)) throw Error(Errc::DomainError, "need alpha < beta");
  return moments_about(0.0, 1.0, alpha, beta, 0.0, order);
}

std::vector<double> shifted_moments(const TruncatedGaussian& dist, double center, int order) {
  check_order(order);
  return moments_about(dist.mu_bar(), dist.sigma_bar(), dist.a(), dist.b(), center, order);
}

std::vector<long double> shifted_moments_extended(const TruncatedGaussian& dist, long double center, int order) {
  check_order(order);
  using L = long double;
  return moments_about<L>(dist.mu_bar(), dist.sigma_bar(), dist.a(), dist.b(), center, order);
}

MomentTable raw_moments(const TruncatedGaussian& dist, int order) {
  check_order(order);
  MomentTable table;
  table.order = order;
  table.raw = shifted_moments(dist, 0.0, order);
  table.central = shifted_moments(dist, dist.mu(), order);
  table.raw[0] = 1.0;
  table.central[0] = 1.0;
#ifdef STMIR_CHECKED
  const double err = moment_crosscheck_error(dist, table);
  if (err > 1e-8) throw Error(Errc::NumericalMismatch, "moment recursion disagrees with quadrature by " + std::to_string(err));
#endif
  return table;
}

double moment_crosscheck_error(const TruncatedGaussian& dist, const MomentTable& table, const QuadratureOptions& options) {
  double worst = 0.0;
  for (int m = 1; m <= table.order; ++m) {
    const double q = dist.expectation([m](double x) { return std::pow(x, m); }, options);
    if (q != 0.0) worst = std::max(worst, std::abs(table.raw[static_cast<std::size_t>(m)] - q) / std::abs(q));
    if (m % 2 == 0) {
      const double mu = dist.mu();
      const double qc = dist.expectation([m, mu](double x) { return std::pow(x - mu, m); }, options);
      if (qc != 0.0) worst = std::max(worst, std::abs(table.central[static_cast<std::size_t>(m)] - qc) / std::abs(qc));
    }
  }
  return worst;
}

}  // namespace stmir
