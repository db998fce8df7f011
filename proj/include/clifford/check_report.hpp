#pragma once

#include <string>

namespace clifford {

/// Outcome of a certification step. Failures are data, not exceptions.
struct CheckReport {
  std::string name;
  bool passed = false;
  double max_residual = 0.0;
  int checked = 0;
  std::string detail;
};

}  // namespace clifford
