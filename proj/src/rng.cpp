#include "mpre/rng.hpp"

#include <cmath>
#include <numbers>

namespace mpre {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c,
                         const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t{kMult0} * c[0];
  const std::uint64_t p1 = std::uint64_t{kMult1} * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    philox_round(counter, key);
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return counter;
}

GaussianPair gaussian_pair(std::uint64_t seed, std::uint32_t stream,
                           std::uint32_t level, std::uint64_t index) {
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const std::array<std::uint32_t, 4> ctr = {
      stream, level, static_cast<std::uint32_t>(index),
      static_cast<std::uint32_t>(index >> 32)};
  const auto x = philox4x32(ctr, key);
  const std::uint64_t a = (std::uint64_t{x[0]} << 32) | x[1];
  const std::uint64_t b = (std::uint64_t{x[2]} << 32) | x[3];
  // u1 in (0,1] keeps the log finite; u2 in [0,1).
  const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

double gaussian(std::uint64_t seed, std::uint32_t stream, std::uint32_t level,
                std::uint64_t index) {
  return gaussian_pair(seed, stream, level, index).first;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const std::array<std::uint32_t, 4> ctr = {
      kStreamDerive, 0, static_cast<std::uint32_t>(salt),
      static_cast<std::uint32_t>(salt >> 32)};
  const auto x = philox4x32(ctr, key);
  return (std::uint64_t{x[0]} << 32) | x[1];
}

}  // namespace mpre
