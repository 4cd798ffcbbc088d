#pragma once

#include <stdexcept>

namespace mpre {

// Numeric failure: degenerate normalization, non-finite result, failed fit.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File format or I/O problem.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mpre
