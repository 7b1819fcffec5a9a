#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qinterf {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20080416;
  int parallel = 1;
  // Criterion ids to run; empty runs all twelve.
  std::vector<int> only;
};

inline constexpr int kCriterionCount = 12;

// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// A criterion that overruns its time budget fails.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &options,
                                            std::ostream &out);

} // namespace qinterf
