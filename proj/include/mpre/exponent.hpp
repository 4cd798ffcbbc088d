#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpre/dyadic.hpp"

namespace mpre {

enum class ExponentKind { constant, smooth, riemann_liouville, tabulated };

struct HolderMetadata {
  double gamma = 1.0;  // pathwise Holder order of A
  double rho = 1.0;    // mean-square Holder order of A
};

// Exponent process A(s), s in [0,1], with values in [lower, upper] inside
// (1/2, 1). Constant and sinusoid kinds evaluate their exact formula; the
// Riemann-Liouville and tabulated kinds interpolate linearly between the
// stored dyadic grid values. Immutable after construction.
struct ExponentProcess {
  ExponentKind kind = ExponentKind::constant;
  double lower = 0.0;
  double upper = 0.0;
  int grid_level = 0;
  std::vector<double> grid_values;  // size 2^grid_level + 1
  HolderMetadata metadata;
  std::optional<std::uint64_t> source_seed;  // driving seed for the RL kind

  // smooth kind parameters: A(s) = midpoint + amplitude * sin(2 pi freq s)
  double midpoint = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;

  double eval(double s) const;
  double operator()(double s) const { return eval(s); }

  // Breakpoints of the piecewise-linear definition inside (lo, hi); analytic
  // kinds contribute none.
  void append_knots(double lo, double hi, std::vector<double>& out) const;

  std::string describe() const;
};

ExponentProcess make_constant(double H);
ExponentProcess make_smooth(double a, double b, double frequency,
                            int grid_level = 12);
// A(s) = a + (b-a) * (R_H(s) - min R_H) / (max R_H - min R_H) on the grid of
// `path`, the R_H values coming from the left-point sum along that path.
ExponentProcess make_rl_exponent(double H, double a, double b,
                                 const BrownianPath& path);
// Values on a dyadic grid (size 2^L + 1); bounds taken from the data.
ExponentProcess make_tabulated(std::vector<double> grid_values);

ExponentProcess load_exponent_csv(const std::string& file);
void save_exponent_csv(const ExponentProcess& exponent,
                       const std::string& file);

// Max over grid pairs at dyadic separations 2^-j, j <= grid level, of
// |A(s'') - A(s')| / |s'' - s'|^gamma.
double estimate_c1(const ExponentProcess& exponent, double gamma);

// Parsed exponent request: const:<H> | sin:<a>:<b>:<f> | rl:<H>:<a>:<b>[:indep]
// | file:<path>. `realize` binds it to a driving path (the RL kind reads the
// path itself, or a sibling path under a derived seed when independent).
struct ExponentSpec {
  ExponentKind kind = ExponentKind::constant;
  double H = 0.7;
  double a = 0.0;
  double b = 0.0;
  double frequency = 1.0;
  bool independent = false;
  std::string file;

  static ExponentSpec parse(const std::string& text);
  std::string str() const;
  ExponentProcess realize(const BrownianPath& driving) const;
};

struct MeanSquareHolderReport {
  std::vector<double> separations;
  std::vector<double> mean_square;  // Monte Carlo E|A(x) - A(y)|^2 per separation
  double fitted_slope = 0.0;        // log2 mean_square vs log2 separation
  double slope_stderr = 0.0;
  bool degenerate = false;          // some separation had zero mean square
  double rho_target = 0.0;
  int n_seeds = 0;
};

// Monte Carlo check of E|A(x)-A(y)|^2 <= c |x-y|^{2 rho}: the fitted slope
// should reach 2 rho up to estimation slack.
MeanSquareHolderReport check_mean_square_holder(const ExponentSpec& spec,
                                                double rho, int n_seeds,
                                                std::uint64_t master_seed,
                                                int grid_level = 8);

}  // namespace mpre
