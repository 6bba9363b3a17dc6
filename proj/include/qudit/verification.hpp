#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qudit {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double metric = 0.0;     ///< worst observed deviation
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyOptions {
  /// Caps the dimensions swept by every criterion.
  int d_max = 6;
  std::uint64_t seed = 7;
  /// Finest monopole grid; the coarse grid is half of it.
  int monopole_grid = 256;
};

inline constexpr int kCriterionCount = 10;

/// Throws IndexOutOfRange for id outside 1..kCriterionCount.
CriterionResult run_criterion(int id, const VerifyOptions& options = {});
std::vector<CriterionResult> run_all_criteria(const VerifyOptions& options = {});

/// "PASS  3  name  metric=... tol=...  detail", one line per criterion.
std::string format_result(const CriterionResult& result);

}  // namespace qudit
