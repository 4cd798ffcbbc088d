#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mpre/rng.hpp"
#include "stats.hpp"

using namespace mpre;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Reference outputs from the Random123 kat_vectors file.
  auto r0 = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(r0[0] == 0x6627e8d5u);
  CHECK(r0[1] == 0xe169c58du);
  CHECK(r0[2] == 0xbc57ac4cu);
  CHECK(r0[3] == 0x9b00dbd8u);

  auto r1 = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                       {0xffffffffu, 0xffffffffu});
  CHECK(r1[0] == 0x408f276du);
  CHECK(r1[1] == 0x41c83b0eu);
  CHECK(r1[2] == 0xa20bc7c6u);
  CHECK(r1[3] == 0x6d5451fdu);

  auto r2 = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                       {0xa4093822u, 0x299f31d0u});
  CHECK(r2[0] == 0xd16cfe09u);
  CHECK(r2[1] == 0x94fdccebu);
  CHECK(r2[2] == 0x5001e420u);
  CHECK(r2[3] == 0x24126ea1u);
}

TEST_CASE("gaussian draws are pure functions of the counter") {
  const double a = gaussian(42, kStreamBridge, 3, 17);
  const double b = gaussian(42, kStreamBridge, 3, 17);
  CHECK(a == b);
  CHECK(gaussian(42, kStreamBridge, 3, 18) != a);
  CHECK(gaussian(42, kStreamBridge, 4, 17) != a);
  CHECK(gaussian(42, kStreamGeneric, 3, 17) != a);
  CHECK(gaussian(43, kStreamBridge, 3, 17) != a);
}

TEST_CASE("gaussian pairs have the right moments") {
  std::vector<double> sample;
  const std::size_t n = 200000;
  sample.reserve(n);
  for (std::size_t i = 0; i < n / 2; ++i) {
    const auto p = gaussian_pair(7, kStreamGeneric, 0, i);
    sample.push_back(p.first);
    sample.push_back(p.second);
  }
  const auto m = test::moments(sample);
  const double se_mean = 1.0 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(m.mean) < 5.0 * se_mean);
  const double se_var = std::sqrt(2.0 / static_cast<double>(n - 1));
  CHECK(std::abs(m.variance - 1.0) < 6.0 * se_var);
}

TEST_CASE("gaussian sample passes a KS normality test") {
  std::vector<double> sample;
  for (std::size_t i = 0; i < 4096; ++i)
    sample.push_back(gaussian(123, kStreamGeneric, 1, i));
  const double d = test::ks_statistic(sample);
  CHECK(test::ks_pvalue(d, sample.size()) > 0.01);
}

TEST_CASE("derived seeds separate by salt") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}
