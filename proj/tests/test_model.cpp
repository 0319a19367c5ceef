#include <cmath>
#include <complex>
#include <stdexcept>

#include <catch2/catch_amalgamated.hpp>

#include "thermoroute/model.hpp"

using namespace thermoroute;

TEST_CASE("cascaded parameter validation accepts physical sets") {
  CascadedParams params;
  params.gamma1 = 0.5;
  params.gamma2 = 2.0;
  params.kappa1 = 0.0;  // a mode may have no private bath
  params.kappa2 = 3.0;
  params.phi = -2.5;
  params.residual_coupling = {0.1, -0.2};
  params.nbar1 = 0.0;
  params.nbar2 = 17.5;
  params.nbar3 = 1e6;
  REQUIRE_NOTHROW(validate(params));
}

TEST_CASE("cascaded parameter validation names the offending field") {
  CascadedParams params;

  SECTION("channel rates must be strictly positive") {
    params.gamma1 = 0.0;
    REQUIRE_THROWS_MATCHES(validate(params), std::invalid_argument,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("gamma1")));
  }
  SECTION("private rates may be zero but not negative") {
    params.kappa2 = -1e-12;
    REQUIRE_THROWS_MATCHES(validate(params), std::invalid_argument,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("kappa2")));
  }
  SECTION("occupancies must be non-negative") {
    params.nbar3 = -0.5;
    REQUIRE_THROWS_MATCHES(validate(params), std::invalid_argument,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("nbar3")));
  }
  SECTION("frequencies must be finite") {
    params.omega1 = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_MATCHES(validate(params), std::invalid_argument,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("omega1")));
  }
  SECTION("residual coupling must be finite in both parts") {
    params.residual_coupling = {0.0, std::nan("")};
    REQUIRE_THROWS_AS(validate(params), std::invalid_argument);
  }
}

TEST_CASE("optomech parameter validation covers both coupling forms") {
  OptomechParams params;

  SECTION("defaults are valid") { REQUIRE_NOTHROW(validate(params)); }
  SECTION("cavity linewidths must be strictly positive") {
    params.kappa1 = 0.0;
    REQUIRE_THROWS_MATCHES(validate(params), std::invalid_argument,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("kappa1")));
  }
  SECTION("mechanical frequency must be strictly positive") {
    params.omega_m = -3.0;
    REQUIRE_THROWS_AS(validate(params), std::invalid_argument);
  }
  SECTION("effective couplings must be non-negative") {
    params.coupling = EffectiveCoupling{-1.0, 2.0, 0.0};
    REQUIRE_THROWS_MATCHES(
        validate(params), std::invalid_argument,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("coupling1")));
  }
  SECTION("driven couplings only need finiteness") {
    DrivenCoupling driven;
    driven.g1 = -1e-3;  // sign is a phase convention, not an error
    driven.drive1 = {1e5, -2e5};
    params.coupling = driven;
    REQUIRE_NOTHROW(validate(params));
    driven.drive2 = {std::nan(""), 0.0};
    params.coupling = driven;
    REQUIRE_THROWS_AS(validate(params), std::invalid_argument);
  }
}

TEST_CASE("phase wrapping lands in (-pi, pi]") {
  const double pi = 3.14159265358979323846;
  CHECK(detail::wrap_phase(0.0) == 0.0);
  CHECK(detail::wrap_phase(pi) == Catch::Approx(pi));
  CHECK(detail::wrap_phase(-pi) == Catch::Approx(pi));  // boundary maps up
  CHECK(detail::wrap_phase(3.0 * pi) == Catch::Approx(pi));
  CHECK(detail::wrap_phase(2.5 * pi) == Catch::Approx(0.5 * pi));
  CHECK(detail::wrap_phase(-0.5 * pi) == Catch::Approx(-0.5 * pi));
  CHECK(detail::wrap_phase(7.0) == Catch::Approx(7.0 - 2.0 * pi));
}

TEST_CASE("bose_einstein matches the exact distribution") {
  SECTION("moderate argument, frozen reference") {
    // 1/(e^20 - 1) evaluated in extended precision.
    CHECK(bose_einstein(20.0) ==
          Catch::Approx(2.0611536266869121e-9).epsilon(1e-14));
  }
  SECTION("order-one argument") {
    CHECK(bose_einstein(std::log(2.0)) == Catch::Approx(1.0).epsilon(1e-14));
  }
  SECTION("small argument keeps full relative precision") {
    // Laurent expansion 1/x - 1/2 + x/12 dominates below the switch point.
    CHECK(bose_einstein(1e-10) ==
          Catch::Approx(9999999999.5).epsilon(1e-13));
    // Continuity across the expm1 / Laurent switch at x = 1e-8.
    const double below = bose_einstein(1e-8 * (1.0 - 1e-12));
    const double above = bose_einstein(1e-8 * (1.0 + 1e-12));
    CHECK(std::abs(below - above) / above < 1e-10);
  }
  SECTION("monotonically decreasing") {
    double previous = bose_einstein(1e-3);
    for (double x = 1e-2; x < 30.0; x *= 2.0) {
      const double current = bose_einstein(x);
      CHECK(current < previous);
      previous = current;
    }
  }
  SECTION("domain ends at zero") {
    REQUIRE_THROWS_AS(bose_einstein(0.0), std::domain_error);
    REQUIRE_THROWS_AS(bose_einstein(-1.0), std::domain_error);
    REQUIRE_THROWS_AS(bose_einstein(std::nan("")), std::invalid_argument);
  }
}

TEST_CASE("bath_occupancy converts physical operating points") {
  const double two_pi = 6.283185307179586;
  BathThermo thermo;
  thermo.frequency = two_pi * 1e10;  // 10 GHz mode

  SECTION("10 mK: deep quantum regime") {
    thermo.temperature = 0.010;
    // x = hbar omega / kB T = 47.992430704256329
    CHECK(bath_occupancy(thermo) ==
          Catch::Approx(1.4359925012169498e-21).epsilon(1e-12));
  }
  SECTION("100 mK: thermal photons appear") {
    thermo.temperature = 0.100;
    // x = 4.7992430704256329
    CHECK(bath_occupancy(thermo) ==
          Catch::Approx(0.0083043733888619861).epsilon(1e-12));
  }
  SECTION("zero temperature maps to zero occupancy") {
    thermo.temperature = 0.0;
    CHECK(bath_occupancy(thermo) == 0.0);
  }
  SECTION("classical limit approaches kB T / hbar omega") {
    thermo.temperature = 300.0;
    const double x = kReducedPlanck * thermo.frequency /
                     (kBoltzmann * thermo.temperature);
    CHECK(bath_occupancy(thermo) ==
          Catch::Approx(1.0 / x - 0.5).epsilon(1e-3));
  }
  SECTION("invalid operating points are rejected") {
    thermo.frequency = 0.0;
    thermo.temperature = 1.0;
    REQUIRE_THROWS_AS(bath_occupancy(thermo), std::invalid_argument);
    thermo.frequency = two_pi * 1e10;
    thermo.temperature = -1.0;
    REQUIRE_THROWS_AS(bath_occupancy(thermo), std::invalid_argument);
  }
}

TEST_CASE("detuning is the frequency difference") {
  CascadedParams params;
  params.omega1 = 2.5;
  params.omega2 = -1.0;
  CHECK(params.detuning() == 3.5);
}
