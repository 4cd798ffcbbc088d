#pragma once

#include <span>

namespace mpre {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  bool ok = false;  // needs >= 3 points and nondegenerate abscissae
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace mpre
