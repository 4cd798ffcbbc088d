#include "mpre/dyadic.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "mpre/errors.hpp"
#include "mpre/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "increment dumps assume a little-endian host");

namespace mpre {

namespace {

constexpr char kMagic[8] = {'M', 'P', 'R', 'E', 'B', 'M', '1', '\0'};

void check_level(int level, int max_level = kMaxLevel) {
  if (level < 0 || level > max_level)
    throw std::invalid_argument("level " + std::to_string(level) +
                                " outside [0, " + std::to_string(max_level) +
                                "]");
}

std::vector<double> prefix_values(const std::vector<double>& increments) {
  std::vector<double> values(increments.size() + 1);
  values[0] = 0.0;
  for (std::size_t k = 0; k < increments.size(); ++k)
    values[k + 1] = values[k] + increments[k];
  return values;
}

// Splits parent increments with midpoint-bridge displacements for
// construction level `child_level`. The second child is parent - child0;
// when rounding leaves no representable pair summing back to the parent
// (roughly one cell in six), the displacement is redrawn under a retry
// counter until the split is exact. The retry is itself counter-based, so
// the construction stays a pure function of (seed, level, cell).
std::vector<double> refine_increments(const std::vector<double>& parent,
                                      std::uint64_t seed, int child_level) {
  const double sigma = std::sqrt(std::ldexp(1.0, -(child_level + 1)));
  std::vector<double> child(2 * parent.size());
  for (std::size_t l = 0; l < parent.size(); ++l) {
    const double p = parent[l];
    double u = 0.0, v = 0.0;
    bool exact = false;
    for (std::uint64_t retry = 0; retry < 64 && !exact; ++retry) {
      const double xi =
          sigma * gaussian(seed, kStreamBridge,
                           static_cast<std::uint32_t>(child_level),
                           (retry << 32) | l);
      u = 0.5 * p + xi;
      v = p - u;
      exact = (u + v == p);
    }
    if (!exact)
      throw numeric_error("bridge split failed to find an exact pair");
    child[2 * l] = u;
    child[2 * l + 1] = v;
  }
  return child;
}

}  // namespace

double dyadic_point(int level, std::int64_t k) {
  return std::ldexp(static_cast<double>(k), -level);
}

std::vector<double> dyadic_grid(int level) {
  check_level(level);
  const std::int64_t n = std::int64_t{1} << level;
  std::vector<double> grid(n + 1);
  for (std::int64_t k = 0; k <= n; ++k) grid[k] = dyadic_point(level, k);
  return grid;
}

BrownianPath sample_brownian(std::uint64_t seed, int level) {
  check_level(level);
  std::vector<double> inc{gaussian(seed, kStreamBridge, 0, 0)};
  for (int j = 1; j <= level; ++j) inc = refine_increments(inc, seed, j);
  BrownianPath path;
  path.level = level;
  path.seed = seed;
  path.values = prefix_values(inc);
  path.increments = std::move(inc);
  return path;
}

BrownianPath refine(const BrownianPath& path) {
  check_level(path.level + 1);
  BrownianPath out;
  out.level = path.level + 1;
  out.seed = path.seed;
  out.increments = refine_increments(path.increments, path.seed, out.level);
  out.values = prefix_values(out.increments);
  return out;
}

BrownianPath path_from_increments(std::vector<double> increments, int level,
                                  std::uint64_t seed) {
  check_level(level);
  if (increments.size() != (std::size_t{1} << level))
    throw std::invalid_argument("increment count does not match level");
  BrownianPath path;
  path.level = level;
  path.seed = seed;
  path.values = prefix_values(increments);
  path.increments = std::move(increments);
  return path;
}

HaarCoefficients haar_coefficients(const BrownianPath& path) {
  if (path.level < 1)
    throw std::invalid_argument(
        "insufficient resolution: haar coefficients need level >= 1");
  HaarCoefficients out;
  out.eps.resize(path.level);
  std::vector<double> cur = path.increments;
  for (int j = path.level - 1; j >= 0; --j) {
    const std::size_t n = std::size_t{1} << j;
    const double scale = std::sqrt(std::ldexp(1.0, j));
    std::vector<double> parent(n);
    auto& eps_j = out.eps[j];
    eps_j.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      parent[k] = cur[2 * k] + cur[2 * k + 1];
      eps_j[k] = scale * (cur[2 * k] - cur[2 * k + 1]);
    }
    cur = std::move(parent);
  }
  out.eta0 = cur[0];
  return out;
}

void save_increments(const BrownianPath& path, const std::string& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw io_error("cannot open " + file + " for writing");
  out.write(kMagic, sizeof(kMagic));
  const auto level = static_cast<std::uint32_t>(path.level);
  out.write(reinterpret_cast<const char*>(&level), sizeof(level));
  out.write(reinterpret_cast<const char*>(&path.seed), sizeof(path.seed));
  out.write(reinterpret_cast<const char*>(path.increments.data()),
            static_cast<std::streamsize>(path.increments.size() *
                                         sizeof(double)));
  if (!out) throw io_error("write failed for " + file);
}

BrownianPath load_increments(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw io_error("cannot open " + file);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw io_error(file + ": not an MPREBM1 increment dump");
  std::uint32_t level = 0;
  std::uint64_t seed = 0;
  in.read(reinterpret_cast<char*>(&level), sizeof(level));
  in.read(reinterpret_cast<char*>(&seed), sizeof(seed));
  if (!in || level > static_cast<std::uint32_t>(kMaxLevel))
    throw io_error(file + ": corrupt header");
  std::vector<double> inc(std::size_t{1} << level);
  in.read(reinterpret_cast<char*>(inc.data()),
          static_cast<std::streamsize>(inc.size() * sizeof(double)));
  if (!in) throw io_error(file + ": truncated increment data");
  return path_from_increments(std::move(inc), static_cast<int>(level), seed);
}

}  // namespace mpre
