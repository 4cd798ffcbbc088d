#include "mpre/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "mpre/errors.hpp"
#include "mpre/fit.hpp"
#include "mpre/parallel.hpp"
#include "mpre/rng.hpp"

namespace mpre {

namespace {

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

// Inverse standard normal on the upper half via Newton from a rough start.
double standard_normal_quantile(double p) {
  double x = std::sqrt(std::max(-2.0 * std::log(std::max(1.0 - p, 1e-300)), 0.25));
  for (int it = 0; it < 60; ++it) {
    const double err = standard_normal_cdf(x) - p;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    if (pdf <= 0.0) break;
    const double dx = err / pdf;
    x -= dx;
    if (std::abs(dx) < 1e-13 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

// The grid level of a dyadic PathSeries, or -1 if the times are not the
// canonical dyadic grid.
int series_grid_level(const PathSeries& series) {
  const std::size_t n = series.times.size();
  if (n < 2) return -1;
  const std::size_t cells = n - 1;
  if ((cells & (cells - 1)) != 0) return -1;
  const int level = std::countr_zero(cells);
  for (std::size_t k = 0; k < n; ++k)
    if (series.times[k] != dyadic_point(level, static_cast<std::int64_t>(k)))
      return -1;
  return level;
}

std::int64_t window_index(double nu, int level, const char* what) {
  const double scaled = std::ldexp(nu, level);
  const double rounded = std::floor(scaled);
  if (scaled != rounded)
    throw std::invalid_argument(std::string(what) +
                                " endpoint is off the series grid");
  return static_cast<std::int64_t>(rounded);
}

double rho_of(const ExponentSpec& spec) {
  switch (spec.kind) {
    case ExponentKind::constant:
    case ExponentKind::smooth:
    case ExponentKind::tabulated:
      return 1.0;
    case ExponentKind::riemann_liouville:
      return spec.H;
  }
  return 1.0;
}

}  // namespace

double max_abs_normal_median(std::int64_t n) {
  // solve (2 Phi(x) - 1)^n = 1/2  =>  Phi(x) = (1 + 0.5^{1/n}) / 2
  const double tail = -std::expm1(std::log(0.5) / static_cast<double>(n)) / 2.0;
  return standard_normal_quantile(1.0 - tail);
}

double sup_distance(const PathSeries& a, const PathSeries& b) {
  if (a.times.size() != b.times.size() || a.times != b.times)
    throw std::invalid_argument("sup_distance needs identical time grids");
  double best = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    best = std::max(best, std::abs(a.values[i] - b.values[i]));
  return best;
}

RateReport l1_rate_study(const ExponentSpec& spec, int level_min, int level_max,
                         double t_probe, int n_seeds, std::uint64_t master_seed,
                         const QuadratureSpec& quadrature, int threads) {
  if (level_min < 0 || level_max > kMaxLevel || level_max - level_min < 3)
    throw std::invalid_argument("rate study needs at least 4 levels");
  if (!(t_probe > 0.0) || !(t_probe <= 1.0))
    throw std::invalid_argument("probe time must lie in (0,1]");
  if (n_seeds < 1) throw std::invalid_argument("need at least one seed");
  const double rho = rho_of(spec);
  if (!(rho > 0.5))
    throw std::invalid_argument(
        "mean-square exponent rho must exceed 1/2 for the rate bound");

  const int n_levels = level_max - level_min + 1;
  std::vector<double> sums(static_cast<std::size_t>(n_levels) * n_seeds, 0.0);
  parallel_for(static_cast<std::size_t>(n_seeds), threads, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(master_seed, i);
    for (int level = level_min; level <= level_max; ++level) {
      const BrownianPath path = sample_brownian(seed, level);
      const ExponentProcess A = spec.realize(path);
      const KernelContext ctx{A, quadrature};
      double diff = 0.0, carry = 0.0;
      for (std::int64_t l = 0; l < path.cell_count(); ++l) {
        const double s = dyadic_point(level, l);
        if (s >= t_probe) break;
        const double term = (mean_kernel(ctx, t_probe, level, l) -
                             kernel_eval(ctx, t_probe, s)) *
                            path.increments[l];
        const double y = term - carry;
        const double t = diff + y;
        carry = (t - diff) - y;
        diff = t;
      }
      sums[i * n_levels + (level - level_min)] = std::abs(diff);
    }
  });

  RateReport report;
  report.study = "l1_rate";
  report.exponent = spec.str();
  report.n_seeds = n_seeds;
  report.master_seed = master_seed;
  report.target_slope = -(rho - 0.5);
  std::vector<double> xs, ys;
  for (int level = level_min; level <= level_max; ++level) {
    double mean = 0.0;
    for (int i = 0; i < n_seeds; ++i)
      mean += sums[static_cast<std::size_t>(i) * n_levels + (level - level_min)];
    mean /= n_seeds;
    report.levels.push_back(level);
    report.errors.push_back(mean);
    if (mean > 0.0) {
      xs.push_back(level);
      ys.push_back(std::log2(mean));
    }
  }
  const LineFit fit = fit_line(xs, ys);
  if (!fit.ok) {
    report.degenerate = true;
  } else {
    report.fitted_slope = fit.slope;
    report.slope_stderr = fit.slope_stderr;
  }
  return report;
}

HolderReport estimate_uniform_holder(const PathSeries& series, double window_lo,
                                     double window_hi, int j_min, int j_max) {
  const int level = series_grid_level(series);
  if (level < 0)
    throw std::invalid_argument(
        "holder estimation needs a series on a dyadic time grid");
  if (j_min < 1 || j_max > level - 2 || j_max - j_min < 2)
    throw std::invalid_argument(
        "j range must satisfy 1 <= j_min, j_max <= grid level - 2, and span "
        ">= 3 levels");
  if (!(window_lo < window_hi))
    throw std::invalid_argument("empty holder window");
  const std::int64_t i1 = window_index(window_lo, level, "window");
  const std::int64_t i2 = window_index(window_hi, level, "window");

  HolderReport report;
  report.window_lo = window_lo;
  report.window_hi = window_hi;
  report.j_min = j_min;
  report.j_max = j_max;
  std::vector<double> xs, ys;
  for (int j = j_min; j <= j_max; ++j) {
    const std::int64_t step = std::int64_t{1} << (level - j);
    if (i2 - i1 < step)
      throw std::invalid_argument("window too narrow for the requested scales");
    double osc = 0.0;
    for (std::int64_t i = i1; i + step <= i2; ++i)
      osc = std::max(osc, std::abs(series.values[i + step] - series.values[i]));
    const std::int64_t pairs = std::max<std::int64_t>((i2 - i1) >> (level - j), 1);
    report.oscillations.push_back(osc);
    report.pair_counts.push_back(pairs);
    if (osc <= 0.0) {
      report.degenerate = true;
    } else {
      xs.push_back(j);
      ys.push_back(std::log2(osc / max_abs_normal_median(pairs)));
    }
  }
  if (report.degenerate || xs.size() < 3) {
    report.degenerate = true;
    report.estimate = 1.05;
    return report;
  }
  const LineFit fit = fit_line(xs, ys);
  report.estimate = std::clamp(-fit.slope, 0.0, 1.05);
  return report;
}

RegularityReport check_regularity_lowerbound(
    const PathSeries& series, const ExponentProcess& exponent,
    const std::vector<std::pair<double, double>>& windows, int j_min,
    int j_max, double tolerance) {
  if (!(exponent.metadata.gamma > 0.5))
    throw std::invalid_argument(
        "regularity check expects gamma metadata above 1/2");
  const int level = series_grid_level(series);
  if (level < 0)
    throw std::invalid_argument(
        "holder estimation needs a series on a dyadic time grid");
  RegularityReport report;
  report.tolerance = tolerance;
  report.exponent = exponent.describe();
  for (const auto& [lo, hi] : windows) {
    WindowCheck check;
    check.report = estimate_uniform_holder(series, lo, hi, j_min, j_max);
    const std::int64_t i1 = window_index(lo, level, "window");
    const std::int64_t i2 = window_index(hi, level, "window");
    double min_a = exponent.eval(series.times[i1]);
    for (std::int64_t i = i1 + 1; i <= i2; ++i)
      min_a = std::min(min_a, exponent.eval(series.times[i]));
    check.report.min_exponent = min_a;
    check.gap = check.report.estimate - min_a;
    check.pass = check.gap >= -tolerance;
    report.windows.push_back(std::move(check));
  }
  return report;
}

double levy_modulus_ratio(const BrownianPath& path) {
  if (path.level < 10)
    throw std::invalid_argument("levy modulus ratio needs level >= 10");
  double peak = 0.0;
  for (double d : path.increments) peak = std::max(peak, std::abs(d));
  const double delta = std::ldexp(1.0, -path.level);
  return peak / std::sqrt(2.0 * delta * (path.level * std::numbers::ln2));
}

double coefficient_growth_check(const HaarCoefficients& coeffs) {
  if (coeffs.depth() < 4)
    throw std::invalid_argument("coefficient growth check needs depth >= 4");
  double best = 0.0;
  for (int j = 0; j < coeffs.depth(); ++j) {
    const double denom = std::sqrt(static_cast<double>(j) + 1.0);
    for (double e : coeffs.eps[j])
      best = std::max(best, std::abs(e) / denom);
  }
  return best;
}

MomentReport kolmogorov_moment_check(
    const ExponentSpec& spec, const std::vector<std::pair<double, double>>& pairs,
    int n_seeds, int ref_level, std::uint64_t master_seed, int threads) {
  if (n_seeds < 100)
    throw std::invalid_argument("moment check needs at least 100 seeds");
  if (pairs.empty()) throw std::invalid_argument("no probe pairs given");
  std::vector<double> times;
  for (const auto& [t1, t2] : pairs) {
    times.push_back(t1);
    times.push_back(t2);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::map<double, std::size_t> index;
  for (std::size_t i = 0; i < times.size(); ++i) index[times[i]] = i;

  std::vector<double> sq(pairs.size() * static_cast<std::size_t>(n_seeds), 0.0);
  parallel_for(static_cast<std::size_t>(n_seeds), threads, [&](std::size_t i) {
    const PathSeries ref =
        reference_path(derive_seed(master_seed, i), spec, ref_level, times);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const double d =
          ref.values[index.at(pairs[p].second)] - ref.values[index.at(pairs[p].first)];
      sq[i * pairs.size() + p] = d * d;
    }
  });

  // group by separation
  std::map<double, std::pair<double, std::int64_t>> groups;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const double sep = std::abs(pairs[p].second - pairs[p].first);
    auto& g = groups[sep];
    for (int i = 0; i < n_seeds; ++i)
      g.first += sq[static_cast<std::size_t>(i) * pairs.size() + p];
    g.second += n_seeds;
  }

  MomentReport report;
  report.exponent = spec.str();
  report.n_seeds = n_seeds;
  report.ref_level = ref_level;
  report.master_seed = master_seed;
  std::vector<double> xs, ys;
  for (const auto& [sep, g] : groups) {
    const double mean = g.first / static_cast<double>(g.second);
    report.separations.push_back(sep);
    report.mean_square.push_back(mean);
    if (sep > 0.0 && mean > 0.0) {
      xs.push_back(std::log2(sep));
      ys.push_back(std::log2(mean));
    }
  }
  const LineFit fit = fit_line(xs, ys);
  if (!fit.ok) {
    report.degenerate = true;
  } else {
    report.fitted_slope = fit.slope;
    report.slope_stderr = fit.slope_stderr;
  }
  return report;
}

ConvergenceReport single_path_convergence(const ExponentSpec& spec,
                                          std::uint64_t seed, int level_min,
                                          int level_max, int ref_level,
                                          int grid_level, int threads) {
  if (ref_level < level_max + 4)
    throw std::invalid_argument(
        "reference level must exceed the study level by >= 4");
  if (level_min > level_max)
    throw std::invalid_argument("empty level range");
  const std::vector<double> grid = dyadic_grid(grid_level);
  const PathSeries ref = reference_path(seed, spec, ref_level, grid, threads);

  ConvergenceReport report;
  report.exponent = spec.str();
  report.seed = seed;
  report.ref_level = ref_level;
  report.grid_level = grid_level;
  for (int level = level_min; level <= level_max; ++level) {
    const BrownianPath path = sample_brownian(seed, level);
    const ExponentProcess A = spec.realize(path);
    report.levels.push_back(level);
    report.tilde_sup.push_back(
        sup_distance(simulate_tilde(path, A, grid, threads), ref));
    report.hat_sup.push_back(
        sup_distance(simulate_hat(path, A, grid, threads), ref));
  }
  return report;
}

}  // namespace mpre
