#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mpre {

// Keeps increment arrays under 1 GiB and dyadic spacing exact in binary64.
inline constexpr int kMaxLevel = 26;

// k * 2^-level, exact for level <= 52.
double dyadic_point(int level, std::int64_t k);

// The 2^level + 1 points k * 2^-level, k = 0..2^level.
std::vector<double> dyadic_grid(int level);

// Brownian path on the level-J dyadic grid of [0,1].
//
// Increments are the source of truth; values are one-pass prefix sums.
// Paths are built by midpoint-bridge refinement from a single root increment,
// with the bridge displacement at construction level j, parent cell l drawn
// from the counter (seed, j, l). Consequently the same seed names one
// Brownian trajectory across all levels: refine(sample_brownian(s, J)) equals
// sample_brownian(s, J+1) bit for bit, and every parent increment equals the
// sum of its two children exactly.
struct BrownianPath {
  int level = 0;
  std::uint64_t seed = 0;
  std::vector<double> increments;  // size 2^level
  std::vector<double> values;      // size 2^level + 1, values[0] == 0

  std::int64_t cell_count() const {
    return static_cast<std::int64_t>(increments.size());
  }
};

BrownianPath sample_brownian(std::uint64_t seed, int level);
BrownianPath refine(const BrownianPath& path);

// Wraps externally supplied increments (tests, file loads); values re-derived.
BrownianPath path_from_increments(std::vector<double> increments, int level,
                                  std::uint64_t seed);

// Haar coefficients of the driving noise: eta0 is the increment of B over
// [0,1); eps[j][k] = 2^{j/2} (dB_{j+1,2k} - dB_{j+1,2k+1}) for j < depth.
struct HaarCoefficients {
  double eta0 = 0.0;
  std::vector<std::vector<double>> eps;

  int depth() const { return static_cast<int>(eps.size()); }
};

// Extracts coefficients for all j <= path.level - 1 by pairwise coarsening.
// Requires path.level >= 1 (eta0 alone carries no detail levels).
HaarCoefficients haar_coefficients(const BrownianPath& path);

// Binary dump of increments: magic "MPREBM1", level, seed, then the raw
// little-endian 64-bit floats.
void save_increments(const BrownianPath& path, const std::string& file);
BrownianPath load_increments(const std::string& file);

}  // namespace mpre
