#pragma once

// Self-check suite behind `logwave verify`: every module invariant exercised
// with seeded data, one PASS/FAIL line per check.  The eigen-table fault hook
// corrupts the independently recomputed eigenvalue table so the detection
// path itself can be tested end to end.

#include <cstdint>
#include <string>

namespace logwave {

struct VerifyOptions {
  std::uint64_t seed = 42;
  bool inject_eigen_fault = false;
};

struct VerifyResult {
  bool all_passed = true;
  int passed = 0;
  int failed = 0;
  std::string report;  // machine-readable PASS/FAIL lines
};

VerifyResult run_verification(const VerifyOptions& options);

}  // namespace logwave
