#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qsmooth {

// One row of the verification battery. `worst_slack` is the largest signed
// margin by which any trial approached (positive: exceeded) the allowed
// bound; failures count trials whose slack exceeded the check tolerance.
struct CheckResult {
  std::string name;
  long trials = 0;
  long failures = 0;
  double worst_slack = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  long trials = 1000;
  // Self-test hook: shifts every check tolerance to an impossible value so
  // the harness can confirm that failures propagate to a nonzero exit.
  bool corrupt_tolerance = false;
};

// Runs every operator/entropy/smoothing/rate invariant as a seeded check.
// Expensive checks run a capped trial count derived from options.trials;
// the per-row `trials` column reports what actually ran.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

// Runs one named check for exactly `trials` trials (no cap). Unknown names
// throw.
CheckResult run_named_check(const std::string& name, std::uint64_t seed,
                            long trials);

long total_failures(const std::vector<CheckResult>& results);

}  // namespace qsmooth
