#pragma once

#include <string>
#include <vector>

namespace abelkit::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

inline constexpr int kCriteria = 11;

/// One criterion, 1..kCriteria. Exceptions are caught and reported as a
/// failure with the message in `detail`.
CriterionResult run(int id);

/// All criteria, ordered by id; run concurrently on up to `threads` workers
/// (0: hardware concurrency).
std::vector<CriterionResult> run_all(unsigned threads = 0);

}  // namespace abelkit::acceptance
