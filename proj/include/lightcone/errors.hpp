#pragma once

#include <stdexcept>
#include <string>

namespace lightcone {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iteration budget exhausted, norm drift past the abort threshold, and
// similar conditions where continuing would produce numbers not worth
// reporting.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lightcone
