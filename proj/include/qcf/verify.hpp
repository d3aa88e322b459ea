#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qcf {

struct CheckResult {
  int criterion = 0;  // 1..9 for the acceptance criteria, 0 for module invariants
  std::string name;
  bool pass = false;
  bool informational = false;  // reported, never fails the suite
  double residual = 0.0;
  double threshold = 0.0;
  long comparisons = 0;
  bool oracle = false;  // compares against an independent oracle
  std::string detail;
};

struct VerifyOptions {
  std::optional<double> threshold;  // replaces every numerical threshold
  std::uint64_t seed = 42;
};

/// Checks of one acceptance criterion (1..9), or of the module invariants (0).
std::vector<CheckResult> runCriterion(int criterion, const VerifyOptions& options = {});
/// Module invariants followed by criteria 1..9.
std::vector<CheckResult> runAll(const VerifyOptions& options = {});

bool allPassed(const std::vector<CheckResult>& results);
std::string formatResult(const CheckResult& r);

}  // namespace qcf
