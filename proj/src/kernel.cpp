#include "mpre/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace mpre {

namespace {

struct GlRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// Legendre roots by Newton iteration; cached per order.
const GlRule& gl_rule(int m) {
  static std::mutex mutex;
  static std::map<int, GlRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  GlRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= m; ++n) {
        const double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(m, std::move(rule)).first->second;
}

void validate_quadrature(const QuadratureSpec& q) {
  if (q.nodes_per_cell < 4)
    throw std::invalid_argument("quadrature needs at least 4 nodes per cell");
  if (!(q.abs_tol > 0.0))
    throw std::invalid_argument("quadrature abs_tol must be positive");
}

inline double kernel_point(const ExponentProcess& A, double t, double s) {
  const double d = t - s;
  if (d <= 0.0) return 0.0;
  return std::pow(d, A.eval(s) - 0.5);
}

// One Gauss-Legendre panel of f over [u, v].
template <class F>
double gl_panel(const GlRule& rule, double u, double v, F&& f) {
  const double c = 0.5 * (u + v), h = 0.5 * (v - u);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(c + h * rule.nodes[i]);
  return acc * h;
}

// Exact integral of (t-s)^{a*-1/2} over [u, v] with the exponent frozen.
double frozen_piece(double t, double a_star, double u, double v) {
  const double p = a_star + 0.5;
  const double x1 = std::max(t - u, 0.0);
  const double x2 = std::max(t - v, 0.0);
  if (x1 <= 0.0) return 0.0;
  return (std::pow(x1, p) - std::pow(x2, p)) / p;
}

// Integrates K_t over one panel [u, v] whose right end sits at or near the
// kernel's vanishing point: geometric bisection toward v, with the last
// sliver taken as a frozen-exponent antiderivative once its bound is below
// tail_tol.
double singular_panel(const KernelContext& ctx, double t, double u, double v,
                      double tail_tol) {
  const GlRule& rule = gl_rule(ctx.quadrature.nodes_per_cell);
  const double alpha_min = ctx.exponent.lower - 0.5;
  auto f = [&](double s) { return kernel_point(ctx.exponent, t, s); };
  double acc = 0.0;
  double rem = v - u;
  double left = u;
  for (int depth = 0; depth < ctx.quadrature.max_refinement; ++depth) {
    const double tail_bound =
        rem * std::pow(std::max(t - v, 0.0) + rem, alpha_min);
    if (tail_bound <= tail_tol || rem <= v * 0x1.0p-52) break;
    const double mid = v - 0.5 * rem;
    acc += gl_panel(rule, left, mid, f);
    left = mid;
    rem *= 0.5;
  }
  // remainder [left, v] with the exponent frozen at its left edge
  acc += frozen_piece(t, ctx.exponent.eval(left), left, std::min(v, t));
  return acc;
}

// Integral of K_t over [lo, hi]: panels split at exponent knots, analytic
// panels by straight Gauss-Legendre, the panel nearest s = t handled by
// singular_panel.
double integrate_kernel(const KernelContext& ctx, double t, double lo,
                        double hi, double tail_tol) {
  const double b = std::min(hi, t);
  if (!(b > lo)) return 0.0;
  std::vector<double> cuts{lo};
  ctx.exponent.append_knots(lo, b, cuts);
  cuts.push_back(b);
  const GlRule& rule = gl_rule(ctx.quadrature.nodes_per_cell);
  auto f = [&](double s) { return kernel_point(ctx.exponent, t, s); };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double u = cuts[i], v = cuts[i + 1];
    if (t - v < (v - u))
      acc += singular_panel(ctx, t, u, v, tail_tol);
    else
      acc += gl_panel(rule, u, v, f);
  }
  return acc;
}

// Difference integrand g(s) = K_t(s) - K_t(s+h) over [lo, lo+h): panels are
// split at the knots of both terms and refined toward whichever of the steep
// points {t-h, t} is at or just beyond a panel's right end.
double integrate_kernel_difference(const KernelContext& ctx, double t,
                                   double lo, double h, double tail_tol) {
  const double b = std::min(lo + h, t);  // g vanishes beyond t
  if (!(b > lo)) return 0.0;
  std::vector<double> cuts{lo};
  ctx.exponent.append_knots(lo, b, cuts);
  {
    std::vector<double> shifted;
    ctx.exponent.append_knots(lo + h, b + h, shifted);
    for (double s : shifted)
      if (s - h > lo && s - h < b) cuts.push_back(s - h);
  }
  for (double p : {t - h, t})
    if (p > lo && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const GlRule& rule = gl_rule(ctx.quadrature.nodes_per_cell);
  const double alpha_min = ctx.exponent.lower - 0.5;
  auto g = [&](double s) {
    return kernel_point(ctx.exponent, t, s) -
           kernel_point(ctx.exponent, t, s + h);
  };

  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double u = cuts[i], v = cuts[i + 1];
    double steep = std::numeric_limits<double>::infinity();
    for (double p : {t - h, t})
      if (p >= v - 0x1.0p-50) steep = std::min(steep, p - v);
    if (!(steep < (v - u))) {
      acc += gl_panel(rule, u, v, g);
      continue;
    }
    // geometric bisection toward v; both terms' tails are bounded through
    // their distance to the respective vanishing point
    double rem = v - u;
    double left = u;
    for (int depth = 0; depth < ctx.quadrature.max_refinement; ++depth) {
      double tail_bound =
          rem * std::pow(std::max(t - v, 0.0) + rem, alpha_min);
      if (t - h > v - 0x1.0p-50)
        tail_bound +=
            rem * std::pow(std::max(t - h - v, 0.0) + rem, alpha_min);
      if (tail_bound <= tail_tol || rem <= std::abs(v) * 0x1.0p-52) break;
      const double mid = v - 0.5 * rem;
      acc += gl_panel(rule, left, mid, g);
      left = mid;
      rem *= 0.5;
    }
    const double v1 = std::min(v, t);
    if (v1 > left)
      acc += frozen_piece(t, ctx.exponent.eval(left), left, v1);
    const double v2 = std::min(v, t - h);
    if (v2 > left)
      acc -= frozen_piece(t - h, ctx.exponent.eval(left + h), left, v2);
  }
  return acc;
}

}  // namespace

double kernel_eval(const KernelContext& ctx, double t, double s) {
  return kernel_point(ctx.exponent, t, s);
}

double l_eval(double t, double u, double v) {
  if (!(u >= 0.0) || !(u <= 1.0))
    throw std::domain_error("l_eval argument u outside [0,1]");
  if (!(v > 0.5) || !(v < 1.0))
    throw std::domain_error("l_eval exponent value outside (1/2,1)");
  const double d = t - u;
  if (d <= 0.0) return 0.0;
  return std::pow(d, v - 0.5);
}

double haar_eval(int j, std::int64_t k, double s) {
  if (j < 0 || k < 0 || k >= (std::int64_t{1} << j))
    throw std::out_of_range("haar index out of range");
  if (!(s >= 0.0) || !(s < 1.0))
    throw std::domain_error("haar argument outside [0,1)");
  const double left = dyadic_point(j, k);
  const double mid = left + dyadic_point(j + 1, 1);
  const double right = left + dyadic_point(j, 1);
  if (s < left || s >= right) return 0.0;
  const double scale = std::sqrt(std::ldexp(1.0, j));
  return s < mid ? scale : -scale;
}

double haar_unit_eval(double s) {
  if (!(s >= 0.0) || !(s < 1.0))
    throw std::domain_error("haar argument outside [0,1)");
  return 1.0;
}

double mean_kernel(const KernelContext& ctx, double t, int level,
                   std::int64_t cell) {
  validate_quadrature(ctx.quadrature);
  if (level < 0 || level > kMaxLevel || cell < 0 ||
      cell >= (std::int64_t{1} << level))
    throw std::invalid_argument("mean_kernel cell index out of range");
  const double lo = dyadic_point(level, cell);
  const double hi = dyadic_point(level, cell + 1);
  const double tail = 0.25 * ctx.quadrature.abs_tol * std::ldexp(1.0, -level);
  return std::ldexp(integrate_kernel(ctx, t, lo, hi, tail), level);
}

double hat_kernel(const ExponentProcess& exponent, double t, int level,
                  std::int64_t cell) {
  if (level < 0 || level > kMaxLevel || cell < 0 ||
      cell >= (std::int64_t{1} << level))
    throw std::invalid_argument("hat_kernel cell index out of range");
  const double lo = dyadic_point(level, cell);
  const double hi = dyadic_point(level, cell + 1);
  const double a_left = exponent.eval(lo);
  const double p = a_left + 0.5;
  const double x1 = std::max(t - lo, 0.0);
  const double x2 = std::max(t - hi, 0.0);
  if (x1 <= 0.0) return 0.0;
  return std::ldexp((std::pow(x1, p) - std::pow(x2, p)) / p, level);
}

double haar_inner_product(const KernelContext& ctx, double t, int j,
                          std::int64_t k) {
  validate_quadrature(ctx.quadrature);
  if (j < 0 || k < 0 || k >= (std::int64_t{1} << j))
    throw std::out_of_range("haar index out of range");
  const double lo = dyadic_point(j, k);
  const double h = dyadic_point(j + 1, 1);
  const double scale = std::sqrt(std::ldexp(1.0, j));
  const double tail = 0.25 * ctx.quadrature.abs_tol / scale;
  return scale * integrate_kernel_difference(ctx, t, lo, h, tail);
}

double scaling_inner_product(const KernelContext& ctx, double t) {
  validate_quadrature(ctx.quadrature);
  return integrate_kernel(ctx, t, 0.0, 1.0, 0.25 * ctx.quadrature.abs_tol);
}

double increment_constant(const ExponentProcess& exponent) {
  const double term1 = exponent.upper - 0.5;
  const double term2 =
      1.0 / (std::numbers::e * (exponent.lower - 0.5));
  return std::max({term1, term2, 1.0});
}

IncrementLemmaCheck check_increment_lemma(const KernelContext& ctx, double t,
                                          double s_left, double s_right) {
  if (!(0.0 <= s_left) || !(s_left <= s_right) || !(s_right < t) || !(t <= 1.0))
    throw std::domain_error(
        "increment lemma needs 0 <= s' <= s'' < t <= 1");
  IncrementLemmaCheck out;
  out.lhs = std::abs(kernel_eval(ctx, t, s_left) - kernel_eval(ctx, t, s_right));
  const double c0 = increment_constant(ctx.exponent);
  const double a_low = ctx.exponent.lower;
  out.rhs = c0 * (std::pow(t - s_right, a_low - 1.5) * (s_right - s_left) +
                  std::abs(ctx.exponent.eval(s_left) -
                           ctx.exponent.eval(s_right)));
  out.holds = out.lhs <= out.rhs;
  return out;
}

double coefficient_sum(const KernelContext& ctx, double t, int j) {
  double acc = 0.0;
  for (std::int64_t k = 0; k < (std::int64_t{1} << j); ++k)
    acc += std::abs(haar_inner_product(ctx, t, j, k));
  return acc;
}

double exponent_increment_l1(const ExponentProcess& exponent, double h) {
  if (!(h > 0.0) || !(h < 1.0))
    throw std::invalid_argument("separation must lie in (0,1)");
  const double limit = 1.0 - h;
  if (exponent.kind == ExponentKind::constant) return 0.0;

  if (exponent.kind == ExponentKind::smooth) {
    // |difference of sines|: composite Gauss-Legendre fine enough that the
    // |.| kinks contribute below 1e-12
    const GlRule& rule = gl_rule(6);
    const int panels = 1 << 12;
    const double w = limit / panels;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double u = i * w;
      acc += gl_panel(rule, u, u + w, [&](double s) {
        return std::abs(exponent.eval(s) - exponent.eval(s + h));
      });
    }
    return acc;
  }

  // Piecewise-linear kinds: on the lattice of width 2^-q with q chosen so
  // that both the knots and the shift h are lattice-aligned, the difference
  // is linear per cell and |linear| integrates exactly.
  int q = exponent.grid_level;
  const double scaled = std::ldexp(h, q);
  if (scaled != std::floor(scaled)) {
    int j = static_cast<int>(std::ceil(-std::log2(h)));
    while (std::ldexp(h, j) != std::floor(std::ldexp(h, j)) && j <= 40) ++j;
    q = std::max(q, j);
  }
  q = std::min(q, 24);
  const std::int64_t n = std::int64_t{1} << q;
  const auto cells = static_cast<std::int64_t>(std::floor(limit * n));
  const double w = std::ldexp(1.0, -q);
  auto g = [&](double s) { return exponent.eval(s) - exponent.eval(s + h); };
  auto abs_linear = [&](double g0, double g1) {
    if (g0 * g1 >= 0.0) return 0.5 * w * (std::abs(g0) + std::abs(g1));
    return 0.5 * w * (g0 * g0 + g1 * g1) / (std::abs(g0) + std::abs(g1));
  };
  double acc = 0.0;
  double prev = g(0.0);
  for (std::int64_t i = 1; i <= cells; ++i) {
    const double cur = g(dyadic_point(q, i));
    acc += abs_linear(prev, cur);
    prev = cur;
  }
  const double last = dyadic_point(q, cells);
  if (limit > last) {
    const double cur = g(limit);
    const double w_last = limit - last;
    if (prev * cur >= 0.0)
      acc += 0.5 * w_last * (std::abs(prev) + std::abs(cur));
    else
      acc += 0.5 * w_last * (prev * prev + cur * cur) /
             (std::abs(prev) + std::abs(cur));
  }
  return acc;
}

CoefficientSumBound check_coefficient_sum_bound(const KernelContext& ctx,
                                                double t, int j) {
  CoefficientSumBound out;
  out.c0 = increment_constant(ctx.exponent);
  out.c4 = out.c0 / (2.0 * ctx.exponent.lower - 1.0) + 1.0;
  out.lhs = coefficient_sum(ctx, t, j);
  const double h = dyadic_point(j + 1, 1);
  const double root = std::sqrt(std::ldexp(1.0, j));
  out.rhs = out.c4 / root + out.c0 * root * exponent_increment_l1(ctx.exponent, h);
  out.holds = out.lhs <= out.rhs;
  return out;
}

}  // namespace mpre
