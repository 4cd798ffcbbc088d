#pragma once

#include <array>
#include <cstdint>

namespace mpre {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Stateless: every draw is a pure function of (key, counter), so refinement
// and parallel replicates reproduce bit-identically regardless of evaluation
// order.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Draw streams. Each purpose gets its own counter word so draws never collide.
enum RngStream : std::uint32_t {
  kStreamBridge = 0,  // root increment and midpoint-bridge displacements
  kStreamDerive = 1,  // child seed derivation
  kStreamGeneric = 2,
};

struct GaussianPair {
  double first;
  double second;
};

// Two independent N(0,1) variates from one Philox block (Box-Muller).
GaussianPair gaussian_pair(std::uint64_t seed, std::uint32_t stream,
                           std::uint32_t level, std::uint64_t index);

// First component of gaussian_pair.
double gaussian(std::uint64_t seed, std::uint32_t stream, std::uint32_t level,
                std::uint64_t index);

// Deterministic child seed for replicate/auxiliary streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace mpre
