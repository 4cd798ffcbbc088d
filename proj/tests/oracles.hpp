#pragma once

// Independent oracles for the numerical tests. Everything here derives from
// closed forms or plain fine-grid quadrature and stays off the library's
// integration code paths.

#include <cmath>
#include <vector>

#include "mpre/dyadic.hpp"
#include "mpre/exponent.hpp"

namespace mpre::test {

// 2^J int_{l 2^-J}^{(l+1) 2^-J} (t-s)^{H-1/2} ds by the antiderivative.
inline double exact_mean_kernel_const(double H, double t, int level,
                                      std::int64_t cell) {
  const double p = H + 0.5;
  const double lo = dyadic_point(level, cell);
  const double hi = dyadic_point(level, cell + 1);
  const double x1 = std::max(t - lo, 0.0);
  const double x2 = std::max(t - hi, 0.0);
  return std::ldexp((std::pow(x1, p) - std::pow(x2, p)) / p, level);
}

// Independent left-point Riemann-Liouville discretization.
inline double rh_left_sum(double H, const BrownianPath& path, double t) {
  double acc = 0.0;
  for (std::int64_t l = 0; l < path.cell_count(); ++l) {
    const double s = dyadic_point(path.level, l);
    if (s >= t) break;
    acc += std::pow(t - s, H - 0.5) * path.increments[l];
  }
  return acc;
}

// E|R_H(t2) - R_H(t1)|^2 for t1 < t2 by quadrature:
// (t2-t1)^{2H}/(2H) + int_0^{t1} ((t2-s)^{H-1/2} - (t1-s)^{H-1/2})^2 ds,
// the second integral on a grid refined geometrically toward s = t1.
inline double rh_increment_variance(double H, double t1, double t2) {
  const double first = std::pow(t2 - t1, 2.0 * H) / (2.0 * H);
  if (t1 <= 0.0) return first;
  auto f = [&](double s) {
    const double d = std::pow(t2 - s, H - 0.5) - std::pow(t1 - s, H - 0.5);
    return d * d;
  };
  // Composite Simpson on segments geometric toward s = t1; the skipped
  // innermost sliver contributes O((2^-50)^{2H}).
  double acc = 0.0;
  for (int seg = 0; seg < 50; ++seg) {
    const double lo = t1 - t1 * std::pow(0.5, seg);
    const double hi = t1 - t1 * std::pow(0.5, seg + 1);
    const int n = 64;
    const double w = (hi - lo) / n;
    double simpson = f(lo) + f(hi);
    for (int i = 1; i < n; ++i)
      simpson += f(lo + i * w) * (i % 2 == 1 ? 4.0 : 2.0);
    acc += simpson * w / 3.0;
  }
  return first + acc;
}

// <K_t, h_{j,k}> by brute-force midpoint quadrature of the difference form,
// independent of the library integrator.
inline double brute_inner_product(const ExponentProcess& A, double t, int j,
                                  std::int64_t k, int panels = 1 << 15) {
  const double lo = dyadic_point(j, k);
  const double h = dyadic_point(j + 1, 1);
  const double w = h / panels;
  double acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double s = lo + (i + 0.5) * w;
    auto kt = [&](double x) {
      const double d = t - x;
      return d > 0.0 ? std::pow(d, A.eval(x) - 0.5) : 0.0;
    };
    acc += (kt(s) - kt(s + h)) * w;
  }
  return std::sqrt(std::ldexp(1.0, j)) * acc;
}

// Exhaustive grid Holder-constant scan (all pairs).
inline double exhaustive_c1(const ExponentProcess& A, double gamma) {
  const auto& v = A.grid_values;
  const auto n = static_cast<std::int64_t>(v.size());
  double best = 0.0;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t l = i + 1; l < n; ++l) {
      const double sep = dyadic_point(A.grid_level, l - i);
      best = std::max(best, std::abs(v[l] - v[i]) / std::pow(sep, gamma));
    }
  return best;
}

}  // namespace mpre::test
