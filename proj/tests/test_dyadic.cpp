#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "mpre/dyadic.hpp"
#include "mpre/errors.hpp"
#include "stats.hpp"

using namespace mpre;

TEST_CASE("dyadic grids are exact") {
  const auto grid = dyadic_grid(10);
  REQUIRE(grid.size() == 1025);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 1.0);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    CHECK(grid[k + 1] - grid[k] == 0x1.0p-10);
}

TEST_CASE("level bounds are enforced") {
  CHECK_THROWS_AS(sample_brownian(1, -1), std::invalid_argument);
  CHECK_THROWS_AS(sample_brownian(1, kMaxLevel + 1), std::invalid_argument);
  CHECK_THROWS_AS(dyadic_grid(-2), std::invalid_argument);
}

TEST_CASE("level zero path has one increment equal to its endpoint value") {
  const auto path = sample_brownian(7, 0);
  REQUIRE(path.increments.size() == 1);
  CHECK(path.values[0] == 0.0);
  CHECK(path.values[1] == path.increments[0]);
}

TEST_CASE("sampling is deterministic") {
  const auto a = sample_brownian(7, 10);
  const auto b = sample_brownian(7, 10);
  CHECK(a.increments == b.increments);
  CHECK(a.values == b.values);
  const auto c = sample_brownian(8, 10);
  CHECK(a.increments != c.increments);
}

TEST_CASE("refinement splits every parent increment exactly") {
  for (std::uint64_t seed : {1ull, 2ull, 77ull}) {
    const auto parent = sample_brownian(seed, 9);
    const auto child = refine(parent);
    REQUIRE(child.level == 10);
    for (std::int64_t l = 0; l < parent.cell_count(); ++l) {
      const double sum = child.increments[2 * l] + child.increments[2 * l + 1];
      CHECK(parent.increments[l] - sum == 0.0);
    }
  }
}

TEST_CASE("refine agrees with direct sampling at the next level") {
  const auto path = sample_brownian(3, 8);
  const auto refined = refine(path);
  const auto direct = sample_brownian(3, 9);
  CHECK(refined.increments == direct.increments);
  CHECK(refined.values == direct.values);
  CHECK(refine(refined).increments == sample_brownian(3, 10).increments);
}

TEST_CASE("increment variance matches 2^-J over seeds") {
  const int level = 10;
  std::vector<double> sq;
  for (std::uint64_t seed = 0; seed < 256; ++seed) {
    const auto path = sample_brownian(seed, level);
    for (double d : path.increments) sq.push_back(d * d);
  }
  const auto m = test::moments(sq);
  // increments^2 are 2^-J chi^2_1: sd of the mean is sqrt(2) 2^-J / sqrt(n)
  const double target = 0x1.0p-10;
  const double se = std::numbers::sqrt2 * target / std::sqrt(double(sq.size()));
  CHECK(std::abs(m.mean - target) < 3.0 * se);
}

TEST_CASE("bridge displacement variance matches length/4") {
  const int level = 8;
  std::vector<double> xi;
  for (std::uint64_t seed = 0; seed < 256; ++seed) {
    const auto parent = sample_brownian(seed, level);
    const auto child = refine(parent);
    for (std::int64_t l = 0; l < parent.cell_count(); ++l)
      xi.push_back(child.increments[2 * l] - 0.5 * parent.increments[l]);
  }
  const auto m = test::moments(xi);
  const double target = 0x1.0p-10;  // 2^-(J+2)
  const double se =
      target * std::sqrt(2.0 / static_cast<double>(xi.size() - 1));
  CHECK(std::abs(m.variance - target) < 3.0 * se);
}

TEST_CASE("values telescope with zero drift") {
  const auto path = sample_brownian(11, 12);
  double acc = 0.0;
  for (std::int64_t l = 0; l < path.cell_count(); ++l) {
    CHECK(path.values[l] == acc);
    acc += path.increments[l];
  }
  CHECK(path.values.back() == acc);
}

TEST_CASE("haar coefficients by direct substitution") {
  const auto path = path_from_increments({0.3, 0.1}, 1, 0);
  const auto coeffs = haar_coefficients(path);
  CHECK(coeffs.eta0 == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(coeffs.eps[0][0] == doctest::Approx(0.2).epsilon(1e-15));

  const auto symmetric = path_from_increments({0.2, 0.2}, 1, 0);
  CHECK(haar_coefficients(symmetric).eps[0][0] == 0.0);
}

TEST_CASE("haar extraction needs at least one refinement level") {
  const auto path = sample_brownian(1, 0);
  CHECK_THROWS_AS(haar_coefficients(path), std::invalid_argument);
}

TEST_CASE("haar coefficients match the displayed identity across levels") {
  for (std::uint64_t seed : {4ull, 9ull}) {
    const auto path = sample_brownian(seed, 9);
    const auto coeffs = haar_coefficients(path);
    REQUIRE(coeffs.depth() == 9);
    for (int j = 0; j < 9; ++j) {
      const auto fine = sample_brownian(seed, j + 1);
      const double scale = std::sqrt(std::ldexp(1.0, j));
      for (std::int64_t k = 0; k < (std::int64_t{1} << j); ++k) {
        const double direct =
            scale * (fine.increments[2 * k] - fine.increments[2 * k + 1]);
        CHECK(coeffs.eps[j][k] == direct);
      }
    }
    CHECK(coeffs.eta0 == sample_brownian(seed, 0).increments[0]);
  }
}

TEST_CASE("refinement keeps earlier haar coefficients") {
  const auto path = sample_brownian(21, 7);
  const auto coarse = haar_coefficients(path);
  const auto fine = haar_coefficients(refine(path));
  for (int j = 0; j < coarse.depth(); ++j) CHECK(coarse.eps[j] == fine.eps[j]);
  CHECK(coarse.eta0 == fine.eta0);
}

TEST_CASE("epsilon coefficients have unit variance over seeds") {
  std::vector<double> eps;
  for (std::uint64_t seed = 0; seed < 512; ++seed) {
    const auto coeffs = haar_coefficients(sample_brownian(seed, 8));
    for (const auto& row : coeffs.eps)
      for (double e : row) eps.push_back(e);
  }
  const auto m = test::moments(eps);
  const double se = std::sqrt(2.0 / static_cast<double>(eps.size() - 1));
  CHECK(std::abs(m.variance - 1.0) < 3.0 * se);
}

TEST_CASE("scaled increments pass KS normality for most seeds") {
  const int level = 10;
  const double scale = std::sqrt(std::ldexp(1.0, level));
  int passed = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto path = sample_brownian(seed, level);
    std::vector<double> z;
    z.reserve(path.increments.size());
    for (double d : path.increments) z.push_back(d * scale);
    if (test::ks_pvalue(test::ks_statistic(std::move(z)), 1 << level) > 0.01)
      ++passed;
  }
  CHECK(passed >= 95);
}

TEST_CASE("increment dumps round-trip") {
  const auto path = sample_brownian(99, 9);
  const std::string file = "test_dump.mprebm";
  save_increments(path, file);
  const auto loaded = load_increments(file);
  CHECK(loaded.level == path.level);
  CHECK(loaded.seed == path.seed);
  CHECK(loaded.increments == path.increments);
  CHECK(loaded.values == path.values);
  std::remove(file.c_str());

  CHECK_THROWS_AS(load_increments("does_not_exist.mprebm"), io_error);
}
