#include "mpre/exponent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mpre/errors.hpp"
#include "mpre/fit.hpp"
#include "mpre/rng.hpp"

namespace mpre {

namespace {

constexpr std::uint64_t kExponentSalt = 0x45585031;  // "EXP1"

void check_bounds(double a, double b) {
  if (!(a > 0.5) || !(a <= b) || !(b < 1.0))
    throw std::invalid_argument("exponent must lie in (1/2,1)");
}

std::vector<double> tabulate_sin(double mid, double amp, double freq,
                                 int level) {
  const std::int64_t n = std::int64_t{1} << level;
  std::vector<double> v(n + 1);
  for (std::int64_t k = 0; k <= n; ++k)
    v[k] = mid + amp * std::sin(2.0 * std::numbers::pi * freq *
                                dyadic_point(level, k));
  return v;
}

double parse_number(const std::string& token, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(what);
    return v;
  } catch (...) {
    throw std::invalid_argument("bad " + what + ": '" + token + "'");
  }
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double ExponentProcess::eval(double s) const {
  if (!(s >= 0.0) || !(s <= 1.0))
    throw std::domain_error("exponent argument outside [0,1]");
  switch (kind) {
    case ExponentKind::constant:
      return lower;
    case ExponentKind::smooth:
      return midpoint +
             amplitude * std::sin(2.0 * std::numbers::pi * frequency * s);
    case ExponentKind::riemann_liouville:
    case ExponentKind::tabulated: {
      const double scaled = std::ldexp(s, grid_level);
      const auto n = static_cast<std::int64_t>(grid_values.size()) - 1;
      std::int64_t i = std::min<std::int64_t>(
          static_cast<std::int64_t>(scaled), n - 1);
      return std::lerp(grid_values[i], grid_values[i + 1],
                       scaled - static_cast<double>(i));
    }
  }
  throw std::logic_error("unreachable exponent kind");
}

void ExponentProcess::append_knots(double lo, double hi,
                                   std::vector<double>& out) const {
  if (kind == ExponentKind::constant || kind == ExponentKind::smooth) return;
  const double step = std::ldexp(1.0, -grid_level);
  auto first = static_cast<std::int64_t>(std::ceil(lo / step));
  for (std::int64_t k = std::max<std::int64_t>(first, 0);; ++k) {
    const double s = dyadic_point(grid_level, k);
    if (s >= hi) break;
    if (s > lo) out.push_back(s);
  }
}

std::string ExponentProcess::describe() const {
  switch (kind) {
    case ExponentKind::constant:
      return "const:" + format_number(lower);
    case ExponentKind::smooth:
      return "sin:" + format_number(midpoint - amplitude) + ":" +
             format_number(midpoint + amplitude) + ":" +
             format_number(frequency);
    case ExponentKind::riemann_liouville:
      return "rl[a=" + format_number(lower) + ",b=" + format_number(upper) +
             (source_seed ? ",seed=" + std::to_string(*source_seed) : "") +
             "]";
    case ExponentKind::tabulated:
      return "tabulated[level=" + std::to_string(grid_level) + "]";
  }
  return "?";
}

ExponentProcess make_constant(double H) {
  check_bounds(H, H);
  ExponentProcess e;
  e.kind = ExponentKind::constant;
  e.lower = e.upper = H;
  e.grid_level = 0;
  e.grid_values = {H, H};
  e.metadata = {1.0, 1.0};
  return e;
}

ExponentProcess make_smooth(double a, double b, double frequency,
                            int grid_level) {
  check_bounds(a, b);
  if (grid_level < 1 || grid_level > kMaxLevel)
    throw std::invalid_argument("smooth exponent grid level out of range");
  ExponentProcess e;
  e.kind = ExponentKind::smooth;
  e.lower = a;
  e.upper = b;
  e.midpoint = 0.5 * (a + b);
  e.amplitude = 0.5 * (b - a);
  e.frequency = frequency;
  e.grid_level = grid_level;
  e.grid_values = tabulate_sin(e.midpoint, e.amplitude, frequency, grid_level);
  e.metadata = {1.0, 1.0};
  return e;
}

ExponentProcess make_rl_exponent(double H, double a, double b,
                                 const BrownianPath& path) {
  if (!(H > 0.0) || !(H < 1.0))
    throw std::invalid_argument("Hurst parameter must lie in (0,1)");
  check_bounds(a, b);
  if (path.level < 8)
    throw std::invalid_argument("RL exponent needs a driving path of level >= 8");

  const std::int64_t n = path.cell_count();
  // Left-point sum R(l) = sum_{m<l} ((l-m) 2^-J)^{H-1/2} dB_m as a lag
  // convolution; R(0) = 0 takes part in the min/max scan.
  std::vector<double> lag_weight(n + 1, 0.0);
  for (std::int64_t d = 1; d <= n; ++d)
    lag_weight[d] = std::pow(dyadic_point(path.level, d), H - 0.5);
  std::vector<double> R(n + 1, 0.0);
  for (std::int64_t l = 1; l <= n; ++l) {
    double acc = 0.0;
    const double* w = lag_weight.data() + 1;
    for (std::int64_t m = l - 1; m >= 0; --m) acc += w[l - 1 - m] * path.increments[m];
    R[l] = acc;
  }
  const auto [mn_it, mx_it] = std::minmax_element(R.begin(), R.end());
  const double mn = *mn_it, mx = *mx_it;
  if (!(mx > mn))
    throw numeric_error("degenerate normalization: R_H path is constant");

  ExponentProcess e;
  e.kind = ExponentKind::riemann_liouville;
  e.lower = a;
  e.upper = b;
  e.grid_level = path.level;
  e.grid_values.resize(n + 1);
  const double range = mx - mn;
  for (std::int64_t l = 0; l <= n; ++l)
    e.grid_values[l] = std::lerp(a, b, (R[l] - mn) / range);
  e.metadata = {std::max(H - 0.05, 0.05), H};  // working values, not proven
  e.source_seed = path.seed;
  return e;
}

ExponentProcess make_tabulated(std::vector<double> grid_values) {
  if (grid_values.size() < 3)
    throw std::invalid_argument("tabulated exponent needs at least 3 values");
  const std::size_t cells = grid_values.size() - 1;
  if ((cells & (cells - 1)) != 0)
    throw std::invalid_argument(
        "tabulated exponent needs 2^L + 1 values on a dyadic grid");
  double lo = grid_values[0], hi = grid_values[0];
  for (double v : grid_values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  check_bounds(lo, hi);
  ExponentProcess e;
  e.kind = ExponentKind::tabulated;
  e.lower = lo;
  e.upper = hi;
  e.grid_level = std::countr_zero(cells);
  e.grid_values = std::move(grid_values);
  e.metadata = {1.0, 1.0};  // declared, not estimated
  return e;
}

ExponentProcess load_exponent_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw io_error("cannot open " + file);
  std::vector<double> s_col, v_col;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!line.empty() && !std::isdigit(static_cast<unsigned char>(line[0])) &&
        line[0] != '-' && line[0] != '+' && line[0] != '.')
      continue;  // header row
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b))
      throw io_error(file + ": expected 's,value' rows");
    s_col.push_back(parse_number(a, "grid point"));
    v_col.push_back(parse_number(b, "exponent value"));
  }
  if (s_col.size() < 3) throw io_error(file + ": too few rows");
  const std::size_t cells = s_col.size() - 1;
  if ((cells & (cells - 1)) != 0)
    throw io_error(file + ": row count must be 2^L + 1 (dyadic grid)");
  const int level = std::countr_zero(cells);
  for (std::size_t k = 0; k < s_col.size(); ++k)
    if (std::abs(s_col[k] - dyadic_point(level, static_cast<std::int64_t>(k))) >
        1e-12)
      throw io_error(file + ": grid points must be k*2^-L over [0,1]");
  try {
    return make_tabulated(std::move(v_col));
  } catch (const std::invalid_argument& err) {
    throw io_error(file + ": " + err.what());
  }
}

void save_exponent_csv(const ExponentProcess& exponent,
                       const std::string& file) {
  std::ofstream out(file);
  if (!out) throw io_error("cannot open " + file + " for writing");
  out << "s,value\n";
  out.precision(17);
  const std::int64_t n = std::int64_t{1} << exponent.grid_level;
  for (std::int64_t k = 0; k <= n; ++k) {
    const double s = dyadic_point(exponent.grid_level, k);
    out << s << ',' << exponent.eval(s) << '\n';
  }
  if (!out) throw io_error("write failed for " + file);
}

double estimate_c1(const ExponentProcess& exponent, double gamma) {
  if (!(gamma > 0.0) || !(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must lie in (0,1]");
  const auto& v = exponent.grid_values;
  const auto n = static_cast<std::int64_t>(v.size()) - 1;
  const int level = exponent.grid_level;
  double best = 0.0;
  for (int j = 0; j <= level; ++j) {
    const std::int64_t step = std::int64_t{1} << (level - j);
    const double sep = dyadic_point(j, 1);
    const double denom = std::pow(sep, gamma);
    for (std::int64_t i = 0; i + step <= n; ++i)
      best = std::max(best, std::abs(v[i + step] - v[i]) / denom);
  }
  return best;
}

ExponentSpec ExponentSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ':')) parts.push_back(token);
  if (parts.empty()) throw std::invalid_argument("empty exponent spec");

  ExponentSpec spec;
  const std::string& head = parts[0];
  if (head == "const") {
    if (parts.size() != 2)
      throw std::invalid_argument("expected const:<H>");
    spec.kind = ExponentKind::constant;
    spec.H = parse_number(parts[1], "exponent value");
    check_bounds(spec.H, spec.H);
  } else if (head == "sin") {
    if (parts.size() != 4)
      throw std::invalid_argument("expected sin:<a>:<b>:<f>");
    spec.kind = ExponentKind::smooth;
    spec.a = parse_number(parts[1], "lower bound");
    spec.b = parse_number(parts[2], "upper bound");
    spec.frequency = parse_number(parts[3], "frequency");
    check_bounds(spec.a, spec.b);
  } else if (head == "rl") {
    if (parts.size() != 4 && !(parts.size() == 5 && parts[4] == "indep"))
      throw std::invalid_argument("expected rl:<H>:<a>:<b>[:indep]");
    spec.kind = ExponentKind::riemann_liouville;
    spec.H = parse_number(parts[1], "Hurst parameter");
    spec.a = parse_number(parts[2], "lower bound");
    spec.b = parse_number(parts[3], "upper bound");
    spec.independent = parts.size() == 5;
    if (!(spec.H > 0.0) || !(spec.H < 1.0))
      throw std::invalid_argument("Hurst parameter must lie in (0,1)");
    check_bounds(spec.a, spec.b);
  } else if (head == "file") {
    if (parts.size() < 2) throw std::invalid_argument("expected file:<path>");
    spec.kind = ExponentKind::tabulated;
    // Re-join in case the path itself contains ':'.
    spec.file = text.substr(5);
  } else {
    throw std::invalid_argument("unknown exponent kind '" + head + "'");
  }
  return spec;
}

std::string ExponentSpec::str() const {
  switch (kind) {
    case ExponentKind::constant:
      return "const:" + format_number(H);
    case ExponentKind::smooth:
      return "sin:" + format_number(a) + ":" + format_number(b) + ":" +
             format_number(frequency);
    case ExponentKind::riemann_liouville:
      return "rl:" + format_number(H) + ":" + format_number(a) + ":" +
             format_number(b) + (independent ? ":indep" : "");
    case ExponentKind::tabulated:
      return "file:" + file;
  }
  return "?";
}

ExponentProcess ExponentSpec::realize(const BrownianPath& driving) const {
  switch (kind) {
    case ExponentKind::constant:
      return make_constant(H);
    case ExponentKind::smooth:
      return make_smooth(a, b, frequency);
    case ExponentKind::riemann_liouville: {
      if (!independent) return make_rl_exponent(H, a, b, driving);
      const BrownianPath own = sample_brownian(
          derive_seed(driving.seed, kExponentSalt), driving.level);
      return make_rl_exponent(H, a, b, own);
    }
    case ExponentKind::tabulated:
      return load_exponent_csv(file);
  }
  throw std::logic_error("unreachable exponent kind");
}

MeanSquareHolderReport check_mean_square_holder(const ExponentSpec& spec,
                                                double rho, int n_seeds,
                                                std::uint64_t master_seed,
                                                int grid_level) {
  if (!(rho > 0.5) || !(rho <= 1.0))
    throw std::invalid_argument("rho must lie in (1/2,1]");
  if (n_seeds < 1) throw std::invalid_argument("need at least one seed");

  const std::int64_t n = std::int64_t{1} << grid_level;
  const int j_min = 1, j_max = grid_level - 1;
  MeanSquareHolderReport report;
  report.rho_target = rho;
  report.n_seeds = n_seeds;
  std::vector<double> sums(j_max - j_min + 1, 0.0);
  std::vector<std::int64_t> counts(j_max - j_min + 1, 0);
  for (int i = 0; i < n_seeds; ++i) {
    const BrownianPath driving =
        sample_brownian(derive_seed(master_seed, static_cast<std::uint64_t>(i)),
                        grid_level);
    const ExponentProcess A = spec.realize(driving);
    for (int j = j_min; j <= j_max; ++j) {
      const std::int64_t step = n >> j;  // separation 2^-j in grid units
      double acc = 0.0;
      std::int64_t cnt = 0;
      for (std::int64_t k = 0; k + step <= n; ++k) {
        const double x = dyadic_point(grid_level, k);
        const double y = dyadic_point(grid_level, k + step);
        const double d = A.eval(y) - A.eval(x);
        acc += d * d;
        ++cnt;
      }
      sums[j - j_min] += acc;
      counts[j - j_min] += cnt;
    }
  }
  std::vector<double> xs, ys;
  for (int j = j_min; j <= j_max; ++j) {
    const double mean = sums[j - j_min] / static_cast<double>(counts[j - j_min]);
    report.separations.push_back(dyadic_point(j, 1));
    report.mean_square.push_back(mean);
    if (mean <= 0.0) {
      report.degenerate = true;
    } else {
      xs.push_back(-static_cast<double>(j));  // log2 separation
      ys.push_back(std::log2(mean));
    }
  }
  const LineFit fit = fit_line(xs, ys);
  if (report.degenerate || !fit.ok) {
    report.degenerate = true;
    return report;
  }
  report.fitted_slope = fit.slope;
  report.slope_stderr = fit.slope_stderr;
  return report;
}

}  // namespace mpre
