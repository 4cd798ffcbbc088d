#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpre/dyadic.hpp"
#include "mpre/exponent.hpp"
#include "mpre/kernel.hpp"

namespace mpre {

enum class Scheme { tilde, hat, haar };

std::string scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& name);

// A simulated process sampled on a time grid.
struct PathSeries {
  Scheme scheme = Scheme::hat;
  int level = 0;
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<double> values;
  std::string exponent_ref;
};

// Evaluation grids: dyadic:<level> or list:<comma-separated times>.
std::vector<double> parse_time_grid(const std::string& spec);

// Left-point scheme: X~(t) = sum_l K_t(delta_l) dB_l.
PathSeries simulate_tilde(const BrownianPath& path, const ExponentProcess& A,
                          std::vector<double> times, int threads = 1);

// Cell-averaged scheme with frozen exponent: X^(t) = sum_l Khat dB_l.
PathSeries simulate_hat(const BrownianPath& path, const ExponentProcess& A,
                        std::vector<double> times, int threads = 1);

// Truncated Haar series X^J(t) = <K_t,U> eta0 + sum_{j<J} sum_k <K_t,h_jk> eps_jk.
PathSeries simulate_haar_partial(const HaarCoefficients& coeffs,
                                 const KernelContext& ctx,
                                 std::vector<double> times, int level,
                                 int threads = 1);

// Stand-in for the unobservable exact path: the hat scheme on the refined
// trajectory of the same seed at ref_level, the exponent re-realized there.
PathSeries reference_path(std::uint64_t seed, const ExponentSpec& spec,
                          int ref_level, std::vector<double> times,
                          int threads = 1);

// Memory guard for reference levels.
inline constexpr int kMaxReferenceLevel = 24;

}  // namespace mpre
