// Minimal library walkthrough: a perfect two-mode network routes channel
// noise into mode 2 while mode 1 stays at its decoupled occupancy, and an
// interference-matched optomechanical system maps onto the same model.

#include <cstdio>

#include "thermoroute/thermoroute.hpp"

int main() {
  using namespace thermoroute;

  // A symmetric network: both modes decoupled would sit at (200 + 0)/2 = 100.
  CascadedParams params;
  params.gamma1 = params.gamma2 = params.kappa1 = params.kappa2 = 1.0;
  params.nbar1 = params.nbar2 = 200.0;
  params.nbar3 = 0.0;

  const RoutingReport resonant = routing_report(params);
  std::printf("resonant:  n1 = %.6f  n2 = %.6f  dn1 = %+.2e  dn2 = %+.6f\n",
              resonant.n1, resonant.n2, resonant.dn1, resonant.dn2);

  params.omega1 = 1.0;   // detune the modes by two linewidths
  params.omega2 = -1.0;
  const RoutingReport detuned = routing_report(params);
  std::printf("detuned:   n1 = %.6f  n2 = %.6f  dn1 = %+.2e  dn2 = %+.6f\n",
              detuned.n1, detuned.n2, detuned.dn1, detuned.dn2);

  // An interference-matched optomechanical system reduces to the same
  // network when the mechanical linewidth dominates every other rate.
  LinearizedOptomech linear;
  linear.gamma_m = 1000.0;
  linear.coupling1 = linear.coupling2 = 0.5 * std::sqrt(linear.gamma_m);
  linear.phi = 1.5707963267948966;  // pi/2
  linear.hopping = 2.0 * linear.coupling1 * linear.coupling2 / linear.gamma_m;
  linear.delta1 = linear.delta2 = linear.omega_m = 50.0;
  linear.kappa1 = linear.kappa2 = 1.0;
  linear.nbar1 = 200.0;
  linear.nbar2 = 100.0;

  const CascadedParams mapped = map_to_cascaded(linear);
  std::printf("mapped:    gamma1 = %.3f  gamma2 = %.3f  |F| = %.2e\n",
              mapped.gamma1, mapped.gamma2,
              std::abs(mapped.residual_coupling));

  const RoutingReport routed = routing_report(mapped);
  const OccupancyMatrix three =
      lyapunov_steady_state(build_three_mode_rwa_drift(linear));
  std::printf("mapped vs three-mode:  n2 = %.4f vs %.4f\n", routed.n2,
              three.occupancy(1));
  return 0;
}
