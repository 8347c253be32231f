#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chords {

enum class VerifyLevel { fast, full };

// One verification check. `pass` is always value <= limit; `value` is the
// measured discrepancy (count of violations for set-valued checks) and
// `limit` the budget it must stay under.
struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double limit = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct VerificationReport {
  VerifyLevel level = VerifyLevel::fast;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool all_pass = false;
  double seconds = 0.0;
};

// Run every module's oracle and invariant checks. `fast` keeps Monte Carlo
// sizes small (a minute or so); `full` adds the end-to-end pipelines
// (variational recovery at production resolution, a two-solution smoke run,
// determinism of serialized reports). Failures are data, not exceptions:
// a check that throws is recorded as failed with the error text.
// The seed offsets all Monte Carlo streams; tolerances absorb the noise, so
// the pass/fail pattern is seed-independent.
VerificationReport run_verification_suite(VerifyLevel level, std::uint64_t seed);

std::string to_json(const VerificationReport& r);

const char* verify_level_name(VerifyLevel level);
VerifyLevel verify_level_from_name(const std::string& s);

}  // namespace chords
