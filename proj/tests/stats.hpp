#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace mpre::test {

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

// Kolmogorov-Smirnov statistic against N(0,1).
inline double ks_statistic(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

// Asymptotic Kolmogorov distribution tail Q(lambda).
inline double ks_pvalue(double d, std::size_t n) {
  const double lambda =
      d * (std::sqrt(static_cast<double>(n)) + 0.12 +
           0.11 / std::sqrt(static_cast<double>(n)));
  double q = 0.0;
  for (int k = 1; k <= 100; ++k)
    q += 2.0 * (k % 2 == 1 ? 1.0 : -1.0) *
         std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(q, 0.0, 1.0);
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  std::size_t n = 0;
};

inline Moments moments(const std::vector<double>& sample) {
  Moments m;
  m.n = sample.size();
  for (double x : sample) m.mean += x;
  m.mean /= static_cast<double>(m.n);
  for (double x : sample) m.variance += (x - m.mean) * (x - m.mean);
  m.variance /= static_cast<double>(m.n - 1);
  return m;
}

}  // namespace mpre::test
