#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cohflow/advect.hpp"

namespace cohflow {

// Grid-aligned scalar values (FTLE or WCVE) in the row-major node order of
// GridSpec. Undefined entries (e.g. singleton-cluster WCVE) hold the NaN
// sentinel.
struct ScalarField {
  GridSpec grid;
  std::string quantity;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::vector<double> values;

  static double sentinel() { return std::numeric_limits<double>::quiet_NaN(); }
  static bool is_sentinel(double v) { return std::isnan(v); }
};

}  // namespace cohflow
