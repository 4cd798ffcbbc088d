#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mpre/dyadic.hpp"
#include "mpre/exponent.hpp"
#include "mpre/kernel.hpp"
#include "mpre/simulate.hpp"

namespace mpre {

// Max over the shared grid of |a - b|.
double sup_distance(const PathSeries& a, const PathSeries& b);

struct RateReport {
  std::string study;
  std::string exponent;
  std::vector<int> levels;
  std::vector<double> errors;
  double fitted_slope = 0.0;
  double slope_stderr = 0.0;
  double target_slope = 0.0;
  int n_seeds = 0;
  std::uint64_t master_seed = 0;
  bool degenerate = false;
};

// Monte Carlo mean of |X^J(t) - X~^J(t)| at a probe time per level J, with
// the fitted log2 slope against the -(rho - 1/2) target.
RateReport l1_rate_study(const ExponentSpec& spec, int level_min, int level_max,
                         double t_probe, int n_seeds, std::uint64_t master_seed,
                         const QuadratureSpec& quadrature = {.abs_tol = 1e-9},
                         int threads = 1);

struct HolderReport {
  double window_lo = 0.0;
  double window_hi = 1.0;
  int j_min = 0;
  int j_max = 0;
  std::vector<double> oscillations;    // raw osc_j, max |increment| at 2^-j
  std::vector<std::int64_t> pair_counts;  // disjoint-pair counts per level
  double estimate = 0.0;               // in [0, 1.05]
  bool degenerate = false;             // some level had zero oscillation
  double min_exponent = 0.0;           // filled by the lower-bound check
};

// Windowed uniform-Holder estimate. osc_j is the max of |X(t+2^-j) - X(t)|
// over all grid anchors t in the window. The regression runs on oscillations
// normalized by the median max of n_j iid |N(0,1)|: the raw max grows like
// sigma(2^-j) sqrt(2 ln n_j), which at desk scales would push the fitted
// slope well below the true exponent.
HolderReport estimate_uniform_holder(const PathSeries& series, double window_lo,
                                     double window_hi, int j_min, int j_max);

struct WindowCheck {
  HolderReport report;
  double gap = 0.0;  // estimate - min_exponent
  bool pass = false;
};

struct RegularityReport {
  std::vector<WindowCheck> windows;
  double tolerance = 0.1;
  std::string exponent;
};

// Theorem check: the windowed estimate must not undershoot the window minimum
// of A by more than the tolerance.
RegularityReport check_regularity_lowerbound(
    const PathSeries& series, const ExponentProcess& exponent,
    const std::vector<std::pair<double, double>>& windows, int j_min,
    int j_max, double tolerance = 0.1);

// max_l |dB_{J,l}| / sqrt(2 * 2^-J * log(2^J)).
double levy_modulus_ratio(const BrownianPath& path);

// max_{j,k} |eps_{j,k}| / sqrt(j+1).
double coefficient_growth_check(const HaarCoefficients& coeffs);

struct MomentReport {
  std::string exponent;
  std::vector<double> separations;
  std::vector<double> mean_square;
  double fitted_slope = 0.0;
  double slope_stderr = 0.0;
  int n_seeds = 0;
  int ref_level = 0;
  std::uint64_t master_seed = 0;
  bool degenerate = false;
};

// Monte Carlo E|X(t'') - X(t')|^2 over reference paths, grouped by
// separation, with the fitted slope of log2 E vs log2 |t''-t'|.
MomentReport kolmogorov_moment_check(
    const ExponentSpec& spec, const std::vector<std::pair<double, double>>& pairs,
    int n_seeds, int ref_level, std::uint64_t master_seed, int threads = 1);

struct ConvergenceReport {
  std::string exponent;
  std::uint64_t seed = 0;
  int ref_level = 0;
  int grid_level = 0;
  std::vector<int> levels;
  std::vector<double> tilde_sup;  // sup_t |X~^J - reference|
  std::vector<double> hat_sup;    // sup_t |X^^J - reference|
};

// Single-trajectory convergence of both schemes against the refined
// reference on the same seed.
ConvergenceReport single_path_convergence(const ExponentSpec& spec,
                                          std::uint64_t seed, int level_min,
                                          int level_max, int ref_level,
                                          int grid_level, int threads = 1);

// Median of the max of n iid |N(0,1)| (the oscillation normalizer).
double max_abs_normal_median(std::int64_t n);

}  // namespace mpre
