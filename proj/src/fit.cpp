#include "mpre/fit.hpp"

#include <cmath>

namespace mpre {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  LineFit fit;
  if (x.size() != y.size() || x.size() < 3) return fit;
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += r * r;
  }
  fit.slope_stderr = std::sqrt(sse / (n - 2.0) / (sxx - sx * sx / n));
  fit.ok = true;
  return fit;
}

}  // namespace mpre
