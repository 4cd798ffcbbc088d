#include "mpre/simulate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mpre/errors.hpp"
#include "mpre/parallel.hpp"

namespace mpre {

namespace {

// Compensated accumulation keeps per-t sums deterministic and tight; the
// summation order is always l ascending.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void check_times(const std::vector<double>& times) {
  for (double t : times)
    if (!(t >= 0.0) || !(t <= 1.0))
      throw std::invalid_argument("evaluation times must lie in [0,1]");
}

void check_finite(const PathSeries& series) {
  for (double v : series.values)
    if (!std::isfinite(v))
      throw numeric_error("simulation produced a non-finite value");
}

}  // namespace

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::tilde:
      return "tilde";
    case Scheme::hat:
      return "hat";
    case Scheme::haar:
      return "haar";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "tilde") return Scheme::tilde;
  if (name == "hat") return Scheme::hat;
  if (name == "haar") return Scheme::haar;
  throw std::invalid_argument("unknown scheme '" + name +
                              "' (expected tilde|hat|haar)");
}

std::vector<double> parse_time_grid(const std::string& spec) {
  if (spec.rfind("dyadic:", 0) == 0) {
    int level = 0;
    try {
      level = std::stoi(spec.substr(7));
    } catch (...) {
      throw std::invalid_argument("bad dyadic grid spec '" + spec + "'");
    }
    return dyadic_grid(level);
  }
  if (spec.rfind("list:", 0) == 0) {
    std::vector<double> times;
    std::istringstream in(spec.substr(5));
    std::string token;
    while (std::getline(in, token, ',')) {
      try {
        times.push_back(std::stod(token));
      } catch (...) {
        throw std::invalid_argument("bad time value '" + token + "'");
      }
    }
    if (times.empty()) throw std::invalid_argument("empty time list");
    check_times(times);
    return times;
  }
  throw std::invalid_argument("time grid must be dyadic:<level> or list:<csv>");
}

PathSeries simulate_tilde(const BrownianPath& path, const ExponentProcess& A,
                          std::vector<double> times, int threads) {
  check_times(times);
  const std::int64_t n = path.cell_count();
  std::vector<double> left(n), expo(n);
  for (std::int64_t l = 0; l < n; ++l) {
    left[l] = dyadic_point(path.level, l);
    expo[l] = A.eval(left[l]) - 0.5;
  }
  PathSeries out;
  out.scheme = Scheme::tilde;
  out.level = path.level;
  out.seed = path.seed;
  out.exponent_ref = A.describe();
  out.values.resize(times.size());
  out.times = std::move(times);
  parallel_for(out.times.size(), threads, [&](std::size_t i) {
    const double t = out.times[i];
    KahanSum acc;
    for (std::int64_t l = 0; l < n && left[l] < t; ++l)
      acc.add(std::pow(t - left[l], expo[l]) * path.increments[l]);
    out.values[i] = acc.sum;
  });
  check_finite(out);
  return out;
}

PathSeries simulate_hat(const BrownianPath& path, const ExponentProcess& A,
                        std::vector<double> times, int threads) {
  check_times(times);
  const std::int64_t n = path.cell_count();
  const double scale = std::ldexp(1.0, path.level);
  std::vector<double> left(n + 1), power(n), coef(n);
  for (std::int64_t l = 0; l <= n; ++l) left[l] = dyadic_point(path.level, l);
  for (std::int64_t l = 0; l < n; ++l) {
    power[l] = A.eval(left[l]) + 0.5;
    coef[l] = scale / power[l];
  }
  PathSeries out;
  out.scheme = Scheme::hat;
  out.level = path.level;
  out.seed = path.seed;
  out.exponent_ref = A.describe();
  out.values.resize(times.size());
  out.times = std::move(times);
  parallel_for(out.times.size(), threads, [&](std::size_t i) {
    const double t = out.times[i];
    KahanSum acc;
    for (std::int64_t l = 0; l < n && left[l] < t; ++l) {
      const double x1 = t - left[l];
      const double x2 = t - left[l + 1];
      const double hi = std::pow(x1, power[l]);
      const double lo = x2 > 0.0 ? std::pow(x2, power[l]) : 0.0;
      acc.add(coef[l] * (hi - lo) * path.increments[l]);
    }
    out.values[i] = acc.sum;
  });
  check_finite(out);
  return out;
}

PathSeries simulate_haar_partial(const HaarCoefficients& coeffs,
                                 const KernelContext& ctx,
                                 std::vector<double> times, int level,
                                 int threads) {
  check_times(times);
  if (level < 0 || level > coeffs.depth())
    throw std::invalid_argument(
        "haar partial-sum level exceeds coefficient depth");
  PathSeries out;
  out.scheme = Scheme::haar;
  out.level = level;
  out.exponent_ref = ctx.exponent.describe();
  out.values.resize(times.size());
  out.times = std::move(times);
  parallel_for(out.times.size(), threads, [&](std::size_t i) {
    const double t = out.times[i];
    KahanSum acc;
    acc.add(scaling_inner_product(ctx, t) * coeffs.eta0);
    for (int j = 0; j < level; ++j) {
      const auto& eps_j = coeffs.eps[j];
      // <K_t, h_{j,k}> vanishes once the support starts at or beyond t
      for (std::int64_t k = 0;
           k < static_cast<std::int64_t>(eps_j.size()) &&
           dyadic_point(j, k) < t;
           ++k)
        acc.add(haar_inner_product(ctx, t, j, k) * eps_j[k]);
    }
    out.values[i] = acc.sum;
  });
  check_finite(out);
  return out;
}

PathSeries reference_path(std::uint64_t seed, const ExponentSpec& spec,
                          int ref_level, std::vector<double> times,
                          int threads) {
  if (ref_level > kMaxReferenceLevel)
    throw std::invalid_argument("reference level exceeds the memory guard (" +
                                std::to_string(kMaxReferenceLevel) + ")");
  const BrownianPath path = sample_brownian(seed, ref_level);
  const ExponentProcess A = spec.realize(path);
  return simulate_hat(path, A, std::move(times), threads);
}

}  // namespace mpre
