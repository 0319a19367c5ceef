#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>

#include "thermoroute/constants.hpp"

namespace thermoroute {

// ===========================================================================
// Parameter sets
// ===========================================================================

/// Two bosonic modes coupled through a shared unidirectional channel.  Mode i
/// decays into its private thermal bath at rate kappa_i (occupancy nbar_i) and
/// into the shared channel at rate gamma_i; the channel carries occupancy
/// nbar3 and propagation phase phi.  `residual_coupling` is the complex
/// coherent coupling left over after the channel-mediated hopping has been
/// cancelled; zero means the forward direction is completely dark.
///
/// All rates share one frequency unit; occupancies are dimensionless.
struct CascadedParams {
  double omega1 = 0.0;  ///< detuning of mode 1 from the rotating frame
  double omega2 = 0.0;  ///< detuning of mode 2 from the rotating frame
  double gamma1 = 1.0;  ///< decay of mode 1 into the shared channel
  double gamma2 = 1.0;  ///< decay of mode 2 into the shared channel
  double kappa1 = 0.0;  ///< decay of mode 1 into its private bath
  double kappa2 = 0.0;  ///< decay of mode 2 into its private bath
  double phi = 0.0;     ///< propagation phase of the shared channel
  std::complex<double> residual_coupling{0.0, 0.0};
  double nbar1 = 0.0;  ///< occupancy of mode 1's private bath
  double nbar2 = 0.0;  ///< occupancy of mode 2's private bath
  double nbar3 = 0.0;  ///< occupancy of the shared channel

  /// Mutual detuning omega1 - omega2; the routing formulas depend on the two
  /// frequencies only through this difference.
  double detuning() const { return omega1 - omega2; }
};

/// Coupling data given directly at the linearized level: drive-enhanced
/// coupling magnitudes for both cavities plus their relative phase.
struct EffectiveCoupling {
  double coupling1 = 0.0;
  double coupling2 = 0.0;
  double phi = 0.0;
};

/// Coupling data given at the full nonlinear level: single-photon
/// optomechanical couplings and complex drive amplitudes.  The enhanced
/// couplings follow from the classical steady state.
struct DrivenCoupling {
  double g1 = 0.0;
  double g2 = 0.0;
  std::complex<double> drive1{0.0, 0.0};
  std::complex<double> drive2{0.0, 0.0};
};

/// Two driven cavities sharing one mechanical mode, in the frame rotating at
/// the drive frequencies.  `coupling` selects how the optomechanical coupling
/// is specified; everything downstream works at the linearized level.
struct OptomechParams {
  double delta1 = 0.0;   ///< drive detuning of cavity 1
  double delta2 = 0.0;   ///< drive detuning of cavity 2
  double kappa1 = 1.0;   ///< linewidth of cavity 1
  double kappa2 = 1.0;   ///< linewidth of cavity 2
  double omega_m = 1.0;  ///< mechanical frequency
  double gamma_m = 1.0;  ///< mechanical linewidth
  double hopping = 0.0;  ///< direct cavity-cavity coherent coupling
  std::variant<EffectiveCoupling, DrivenCoupling> coupling{EffectiveCoupling{}};
  double nbar1 = 0.0;   ///< occupancy of cavity 1's bath
  double nbar2 = 0.0;   ///< occupancy of cavity 2's bath
  double nbar_m = 0.0;  ///< occupancy of the mechanical bath
};

/// Gauge-fixed linearized description: both enhanced couplings real and
/// non-negative, with the relative phase carried by `phi` in (-pi, pi].
struct LinearizedOptomech {
  double coupling1 = 0.0;
  double coupling2 = 0.0;
  double phi = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double omega_m = 1.0;
  double gamma_m = 1.0;
  double hopping = 0.0;
  double nbar1 = 0.0;
  double nbar2 = 0.0;
  double nbar_m = 0.0;
};

/// A mode frequency and bath temperature in SI units, for converting physical
/// operating points into the dimensionless occupancies used everywhere else.
struct BathThermo {
  double frequency = 0.0;    ///< angular frequency [rad/s]
  double temperature = 0.0;  ///< temperature [K]
};

// ===========================================================================
// Validation
// ===========================================================================

namespace detail {

inline void require_finite(double value, const std::string& name) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument(name + " must be finite, got " +
                                std::to_string(value));
  }
}

inline void require_finite(std::complex<double> value, const std::string& name) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw std::invalid_argument(name + " must have finite real and imaginary parts");
  }
}

inline void require_nonnegative(double value, const std::string& name) {
  require_finite(value, name);
  if (value < 0.0) {
    throw std::invalid_argument(name + " must be >= 0, got " +
                                std::to_string(value));
  }
}

inline void require_positive(double value, const std::string& name) {
  require_finite(value, name);
  if (value <= 0.0) {
    throw std::invalid_argument(name + " must be > 0, got " +
                                std::to_string(value));
  }
}

/// Wraps an angle into (-pi, pi].
inline double wrap_phase(double phi) {
  const double two_pi = 6.283185307179586476925286766559;
  double wrapped = std::remainder(phi, two_pi);
  if (wrapped <= -0.5 * two_pi) wrapped += two_pi;  // remainder can return -pi
  return wrapped;
}

}  // namespace detail

/// Checks every field of `params` and returns it unchanged.  Throws
/// std::invalid_argument naming the first offending field.
inline const CascadedParams& validate(const CascadedParams& params) {
  detail::require_finite(params.omega1, "omega1");
  detail::require_finite(params.omega2, "omega2");
  detail::require_positive(params.gamma1, "gamma1");
  detail::require_positive(params.gamma2, "gamma2");
  detail::require_nonnegative(params.kappa1, "kappa1");
  detail::require_nonnegative(params.kappa2, "kappa2");
  detail::require_finite(params.phi, "phi");
  detail::require_finite(params.residual_coupling, "residual_coupling");
  detail::require_nonnegative(params.nbar1, "nbar1");
  detail::require_nonnegative(params.nbar2, "nbar2");
  detail::require_nonnegative(params.nbar3, "nbar3");
  return params;
}

/// Checks every field of `params` and returns it unchanged.  Throws
/// std::invalid_argument naming the first offending field.
inline const OptomechParams& validate(const OptomechParams& params) {
  detail::require_finite(params.delta1, "delta1");
  detail::require_finite(params.delta2, "delta2");
  detail::require_positive(params.kappa1, "kappa1");
  detail::require_positive(params.kappa2, "kappa2");
  detail::require_positive(params.omega_m, "omega_m");
  detail::require_positive(params.gamma_m, "gamma_m");
  detail::require_finite(params.hopping, "hopping");
  if (const auto* effective = std::get_if<EffectiveCoupling>(&params.coupling)) {
    detail::require_nonnegative(effective->coupling1, "coupling1");
    detail::require_nonnegative(effective->coupling2, "coupling2");
    detail::require_finite(effective->phi, "phi");
  } else {
    const auto& driven = std::get<DrivenCoupling>(params.coupling);
    detail::require_finite(driven.g1, "g1");
    detail::require_finite(driven.g2, "g2");
    detail::require_finite(driven.drive1, "drive1");
    detail::require_finite(driven.drive2, "drive2");
  }
  detail::require_nonnegative(params.nbar1, "nbar1");
  detail::require_nonnegative(params.nbar2, "nbar2");
  detail::require_nonnegative(params.nbar_m, "nbar_m");
  return params;
}

/// Checks every field of `params` and returns it unchanged.  Throws
/// std::invalid_argument naming the first offending field.
inline const LinearizedOptomech& validate(const LinearizedOptomech& params) {
  detail::require_nonnegative(params.coupling1, "coupling1");
  detail::require_nonnegative(params.coupling2, "coupling2");
  detail::require_finite(params.phi, "phi");
  detail::require_finite(params.delta1, "delta1");
  detail::require_finite(params.delta2, "delta2");
  detail::require_positive(params.kappa1, "kappa1");
  detail::require_positive(params.kappa2, "kappa2");
  detail::require_positive(params.omega_m, "omega_m");
  detail::require_positive(params.gamma_m, "gamma_m");
  detail::require_finite(params.hopping, "hopping");
  detail::require_nonnegative(params.nbar1, "nbar1");
  detail::require_nonnegative(params.nbar2, "nbar2");
  detail::require_nonnegative(params.nbar_m, "nbar_m");
  return params;
}

/// Checks `thermo` for a usable operating point: positive frequency and
/// non-negative temperature.
inline const BathThermo& validate(const BathThermo& thermo) {
  detail::require_positive(thermo.frequency, "frequency");
  detail::require_nonnegative(thermo.temperature, "temperature");
  return thermo;
}

// ===========================================================================
// Thermal occupancy
// ===========================================================================

/// Bose-Einstein occupancy 1/(e^x - 1) for x = ħω/k_B·T > 0.
///
/// Uses expm1 so small x keeps full relative precision, and switches to the
/// Laurent expansion 1/x - 1/2 + x/12 below x = 1e-8 where even expm1's
/// rounding of the subtraction would show.  Monotonically decreasing in x.
inline double bose_einstein(double x) {
  detail::require_finite(x, "x");
  if (x <= 0.0) {
    throw std::domain_error("bose_einstein requires x > 0, got " +
                            std::to_string(x));
  }
  if (x < 1e-8) {
    return 1.0 / x - 0.5 + x / 12.0;
  }
  return 1.0 / std::expm1(x);
}

/// Bath occupancy for a physical operating point.  T = 0 maps to occupancy 0.
inline double bath_occupancy(const BathThermo& thermo) {
  validate(thermo);
  if (thermo.temperature == 0.0) return 0.0;
  const double x = kReducedPlanck * thermo.frequency /
                   (kBoltzmann * thermo.temperature);
  return bose_einstein(x);
}

}  // namespace thermoroute
