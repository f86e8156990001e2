#pragma once

// Named verification suites shared by `rankagg verify` and the acceptance
// runner. Each suite is seeded internally and deterministic.

#include <string>
#include <string_view>
#include <vector>

namespace rankagg::verify {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string name;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const;
  /// "a/b checks passed" plus the first failing check, if any.
  std::string summary() const;
};

/// Suite names in acceptance order.
const std::vector<std::string>& suiteNames();

/// Throws InvalidInput for an unknown name.
SuiteReport runSuite(std::string_view name);

}  // namespace rankagg::verify
