// Acceptance gate: runs every built-in check, prints one line per check,
// and fails the process if any check fails.  Tolerances live inside the
// checks themselves (verify.hpp) so this binary and the CLI `verify`
// subcommand can never drift apart.

#include <cstdio>
#include <vector>

#include "thermoroute/verify.hpp"

int main() {
  const std::vector<thermoroute::CheckResult> results =
      thermoroute::run_acceptance_checks();

  bool all_passed = true;
  for (const thermoroute::CheckResult& result : results) {
    all_passed = all_passed && result.passed;
    std::printf("%s %-36s (%6.2f s) %s\n", result.passed ? "PASS" : "FAIL",
                result.name.c_str(), result.seconds, result.detail.c_str());
  }
  std::printf("%s\n", all_passed ? "ACCEPTANCE: PASS" : "ACCEPTANCE: FAIL");
  return all_passed ? 0 : 1;
}
