#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace synsearch {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Worst observed deviation.
  double worst = 0.0;
  double tolerance = 0.0;
};

/// Randomized consistency suites: Poisson series vs. product form, the two
/// formulas for R, and normalization of the two-particle detection table.
std::vector<CheckResult> run_selftest(std::uint64_t seed = 20090432);

}  // namespace synsearch
