#pragma once

namespace thermoroute {

// 2018 CODATA exact values (SI units).
inline constexpr double kReducedPlanck = 1.054571817e-34;  // ħ [J·s]
inline constexpr double kBoltzmann = 1.380649e-23;         // k_B [J/K]

}  // namespace thermoroute
