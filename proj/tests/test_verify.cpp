#include <catch2/catch_amalgamated.hpp>

#include "thermoroute/verify.hpp"

using namespace thermoroute;

namespace {

/// The library's closed form, deliberately skewed by 2e-7 relative — far
/// above the check's 1e-8 gate.  Guards against a vacuous comparison.
double skewed_reference(double kappa, double delta, double m1, double m3) {
  return closed_form_dn2(kappa, delta, m1, m3) * (1.0 + 2e-7);
}

}  // namespace

TEST_CASE("the closed-form grid check passes against the honest reference") {
  const CheckResult result = check_closed_form_grid();
  INFO(result.detail);
  CHECK(result.passed);
  CHECK(result.name == "closed-form-grid");
  CHECK_FALSE(result.detail.empty());
  CHECK(result.seconds >= 0.0);
}

TEST_CASE("the closed-form grid check rejects a perturbed reference") {
  const CheckResult result = check_closed_form_grid(&skewed_reference);
  INFO(result.detail);
  CHECK_FALSE(result.passed);
  CHECK_FALSE(result.detail.empty());
}

TEST_CASE("the linearization consistency check passes and reports detail") {
  const CheckResult result = check_linearization_consistency();
  INFO(result.detail);
  CHECK(result.passed);
  CHECK_FALSE(result.detail.empty());
}

TEST_CASE("the algebraic equivalence check passes and reports detail") {
  const CheckResult result = check_equivalence_algebraic();
  INFO(result.detail);
  CHECK(result.passed);
  CHECK_FALSE(result.detail.empty());
}
