#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "thermoroute/dynamics.hpp"
#include "thermoroute/model.hpp"

namespace thermoroute {

// ===========================================================================
// Classical working point
// ===========================================================================

/// Self-consistent classical amplitudes of the driven system, together with
/// the residual of the fixed-point equations they satisfy.
struct ClassicalSteadyState {
  std::complex<double> alpha1{0.0, 0.0};  ///< cavity 1 amplitude
  std::complex<double> alpha2{0.0, 0.0};  ///< cavity 2 amplitude
  std::complex<double> beta{0.0, 0.0};    ///< mechanical amplitude
  double residual = 0.0;  ///< scaled max violation of the fixed-point equations
  int iterations = 0;
};

/// Solves the classical fixed point
///   (i(delta_i + g_i(beta + beta*)) + kappa_i/2) alpha_i + i J alpha_j = -i E_i
///   (i omega_m + gamma_m/2) beta = -i (g1 |alpha1|^2 + g2 |alpha2|^2)
/// by damped iteration on beta (the cavity pair is linear once beta is
/// frozen, and kappa_i > 0 keeps that 2x2 solve nonsingular).  The damping
/// factor 0.5 tames the bistable regime's oscillation; failure to settle
/// within 10^4 sweeps raises instead of returning a spurious working point.
inline ClassicalSteadyState classical_steady_state(const OptomechParams& params) {
  validate(params);
  const auto* driven = std::get_if<DrivenCoupling>(&params.coupling);
  if (driven == nullptr) {
    throw std::invalid_argument(
        "classical_steady_state needs single-photon couplings and drives; "
        "the parameters carry only effective couplings");
  }

  const std::complex<double> i_unit{0.0, 1.0};
  const int max_iterations = 10000;
  const double tolerance = 1e-15;

  ClassicalSteadyState state;
  Eigen::Vector2cd amplitudes = Eigen::Vector2cd::Zero();
  const Eigen::Vector2cd drives(-i_unit * driven->drive1,
                                -i_unit * driven->drive2);

  const auto cavity_response = [&](std::complex<double> beta) {
    const double shift = 2.0 * beta.real();
    Eigen::Matrix2cd response;
    response(0, 0) = i_unit * (params.delta1 + driven->g1 * shift) +
                     0.5 * params.kappa1;
    response(0, 1) = i_unit * params.hopping;
    response(1, 0) = i_unit * params.hopping;
    response(1, 1) = i_unit * (params.delta2 + driven->g2 * shift) +
                     0.5 * params.kappa2;
    return response;
  };
  const auto mechanical_pull = [&](const Eigen::Vector2cd& alpha) {
    const double radiation = driven->g1 * std::norm(alpha[0]) +
                             driven->g2 * std::norm(alpha[1]);
    return -i_unit * radiation /
           (i_unit * params.omega_m + 0.5 * params.gamma_m);
  };

  bool converged = false;
  for (int iteration = 1; iteration <= max_iterations; ++iteration) {
    amplitudes = cavity_response(state.beta).partialPivLu().solve(drives);
    const std::complex<double> fresh = mechanical_pull(amplitudes);
    const std::complex<double> next = 0.5 * state.beta + 0.5 * fresh;
    const double change = std::abs(next - state.beta);
    state.beta = next;
    state.iterations = iteration;
    if (change <= tolerance * (1.0 + std::abs(next))) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw std::runtime_error(
        "classical fixed point did not settle within 10000 iterations; "
        "the working point is bistable or marginally damped");
  }

  amplitudes = cavity_response(state.beta).partialPivLu().solve(drives);
  state.alpha1 = amplitudes[0];
  state.alpha2 = amplitudes[1];

  const Eigen::Vector2cd cavity_violation =
      cavity_response(state.beta) * amplitudes - drives;
  const std::complex<double> mechanical_violation =
      (i_unit * params.omega_m + 0.5 * params.gamma_m) * state.beta +
      i_unit * (driven->g1 * std::norm(state.alpha1) +
                driven->g2 * std::norm(state.alpha2));
  const double scale = 1.0 + drives.cwiseAbs().maxCoeff() +
                       (params.omega_m + params.gamma_m) * std::abs(state.beta);
  state.residual = std::max(cavity_violation.cwiseAbs().maxCoeff(),
                            std::abs(mechanical_violation)) /
                   scale;
  return state;
}

// ===========================================================================
// Linearization and gauge
// ===========================================================================

/// Result of rotating a pair of complex couplings into the standard gauge.
struct GaugeFixedCoupling {
  double magnitude1 = 0.0;
  double magnitude2 = 0.0;
  double phi = 0.0;  ///< relative phase in (-pi, pi]
};

/// Absorbs the common phase of two complex couplings into the mechanical
/// operators: the first becomes real non-negative and the gauge-invariant
/// relative phase arg(raw2) - arg(raw1) lands on the second.
inline GaugeFixedCoupling gauge_fix(std::complex<double> raw1,
                                    std::complex<double> raw2) {
  detail::require_finite(raw1, "raw1");
  detail::require_finite(raw2, "raw2");
  GaugeFixedCoupling fixed;
  fixed.magnitude1 = std::abs(raw1);
  fixed.magnitude2 = std::abs(raw2);
  // The relative phase is gauge-invariant only while both couplings are
  // nonzero; with either one zero the mechanical rotation absorbs the
  // other's phase entirely, so the canonical representative is phi = 0.
  fixed.phi = fixed.magnitude1 > 0.0 && fixed.magnitude2 > 0.0
                  ? detail::wrap_phase(std::arg(raw2) - std::arg(raw1))
                  : 0.0;
  return fixed;
}

/// Reduces full optomech parameters to the gauge-fixed linearized level.
/// Effective couplings pass through (phase wrapped); driven couplings go via
/// the classical working point, which also shifts each cavity detuning by the
/// static radiation-pressure displacement g_i (beta + beta*).
inline LinearizedOptomech linearize(const OptomechParams& params) {
  validate(params);
  LinearizedOptomech linear;
  linear.kappa1 = params.kappa1;
  linear.kappa2 = params.kappa2;
  linear.omega_m = params.omega_m;
  linear.gamma_m = params.gamma_m;
  linear.hopping = params.hopping;
  linear.nbar1 = params.nbar1;
  linear.nbar2 = params.nbar2;
  linear.nbar_m = params.nbar_m;

  if (const auto* effective = std::get_if<EffectiveCoupling>(&params.coupling)) {
    linear.coupling1 = effective->coupling1;
    linear.coupling2 = effective->coupling2;
    linear.phi = detail::wrap_phase(effective->phi);
    linear.delta1 = params.delta1;
    linear.delta2 = params.delta2;
    validate(linear);
    return linear;
  }

  const auto& driven = std::get<DrivenCoupling>(params.coupling);
  const ClassicalSteadyState working_point = classical_steady_state(params);
  const GaugeFixedCoupling gauge = gauge_fix(driven.g1 * working_point.alpha1,
                                             driven.g2 * working_point.alpha2);
  linear.coupling1 = gauge.magnitude1;
  linear.coupling2 = gauge.magnitude2;
  linear.phi = gauge.phi;
  const double displacement = 2.0 * working_point.beta.real();
  linear.delta1 = params.delta1 + driven.g1 * displacement;
  linear.delta2 = params.delta2 + driven.g2 * displacement;
  validate(linear);
  return linear;
}

// ===========================================================================
// Drift builders
// ===========================================================================

/// Beam-splitter-coupled three-mode model (cavity 1, cavity 2, mechanics)
/// with each mode damped into its own thermal bath.  Valid once the
/// counter-rotating coupling terms average out, i.e. for couplings and
/// linewidths well below the mechanical frequency.
inline DriftModel build_three_mode_rwa_drift(const LinearizedOptomech& params) {
  validate(params);
  const std::complex<double> i_unit{0.0, 1.0};
  const std::complex<double> cross =
      params.coupling2 * std::exp(i_unit * params.phi);

  DriftModel model;
  model.drift.resize(3, 3);
  model.drift(0, 0) = -i_unit * params.delta1 - 0.5 * params.kappa1;
  model.drift(0, 1) = -i_unit * params.hopping;
  model.drift(0, 2) = -i_unit * params.coupling1;
  model.drift(1, 0) = -i_unit * params.hopping;
  model.drift(1, 1) = -i_unit * params.delta2 - 0.5 * params.kappa2;
  model.drift(1, 2) = -i_unit * cross;
  model.drift(2, 0) = -i_unit * params.coupling1;
  model.drift(2, 1) = -i_unit * std::conj(cross);
  model.drift(2, 2) = -i_unit * params.omega_m - 0.5 * params.gamma_m;

  model.noise_input.setZero(3, 3);
  model.noise_input(0, 0) = std::sqrt(params.kappa1);
  model.noise_input(1, 1) = std::sqrt(params.kappa2);
  model.noise_input(2, 2) = std::sqrt(params.gamma_m);

  model.bath_occupancy.resize(3);
  model.bath_occupancy << params.nbar1, params.nbar2, params.nbar_m;
  return model;
}

/// Lorentzian response of the mechanical mode,
/// chi_m(omega) = 1 / (gamma_m/2 - i (omega - omega_m)).
inline std::complex<double> mechanical_susceptibility(double omega,
                                                      double omega_m,
                                                      double gamma_m) {
  detail::require_finite(omega, "omega");
  detail::require_positive(omega_m, "omega_m");
  detail::require_positive(gamma_m, "gamma_m");
  return 1.0 / std::complex<double>(0.5 * gamma_m, -(omega - omega_m));
}

/// How badly the broadband-mechanics assumption is strained at the chosen
/// evaluation frequency: max(kappa_i, G_i, |omega_eval - omega_m|) / gamma_m.
/// Values well below one mean the eliminated model is trustworthy.
inline double adiabatic_validity_ratio(const LinearizedOptomech& params,
                                       double omega_eval) {
  validate(params);
  detail::require_finite(omega_eval, "omega_eval");
  const double fastest = std::max(
      {params.kappa1, params.kappa2, params.coupling1, params.coupling2,
       std::abs(omega_eval - params.omega_m)});
  return fastest / params.gamma_m;
}

/// Two-cavity model with the mechanics integrated out at evaluation
/// frequency omega_eval.  The mechanical mode contributes chi_m-weighted
/// damping, cross coupling, and a shared thermal noise column; the noise
/// carries |chi_m| with the relative phase kept on cavity 2, a gauge choice
/// on the eliminated input that leaves the model damping-consistent at every
/// omega_eval because Re chi_m = (gamma_m/2) |chi_m|^2.
inline DriftModel adiabatic_eliminate(const LinearizedOptomech& params,
                                      double omega_eval) {
  validate(params);
  const std::complex<double> chi =
      mechanical_susceptibility(omega_eval, params.omega_m, params.gamma_m);
  const std::complex<double> i_unit{0.0, 1.0};
  const std::complex<double> forward_phase = std::exp(i_unit * params.phi);
  const double product = params.coupling1 * params.coupling2;

  DriftModel model;
  model.drift.resize(2, 2);
  model.drift(0, 0) = -i_unit * params.delta1 - 0.5 * params.kappa1 -
                      params.coupling1 * params.coupling1 * chi;
  model.drift(0, 1) =
      -i_unit * params.hopping - product * std::conj(forward_phase) * chi;
  model.drift(1, 0) = -i_unit * params.hopping - product * forward_phase * chi;
  model.drift(1, 1) = -i_unit * params.delta2 - 0.5 * params.kappa2 -
                      params.coupling2 * params.coupling2 * chi;

  const double channel_weight = std::sqrt(params.gamma_m) * std::abs(chi);
  model.noise_input.setZero(2, 3);
  model.noise_input(0, 0) = std::sqrt(params.kappa1);
  model.noise_input(1, 1) = std::sqrt(params.kappa2);
  model.noise_input(0, 2) = channel_weight * params.coupling1;
  model.noise_input(1, 2) = channel_weight * params.coupling2 * forward_phase;

  model.bath_occupancy.resize(3);
  model.bath_occupancy << params.nbar1, params.nbar2, params.nbar_m;
  return model;
}

// ===========================================================================
// Cascaded-network correspondence
// ===========================================================================

/// Expresses the broadband-mechanics limit as a cascaded two-mode network:
/// the mechanical mode becomes the shared channel (rates 4 G_i^2 / gamma_m,
/// occupancy nbar_m, phase phi) and the residual coupling
/// F = J - 2i G1 G2 e^{-i phi} / gamma_m collects whatever coherent hopping
/// the channel-mediated interference fails to cancel.  At the eliminated
/// model's resonance (omega_eval = omega_m) the two drifts agree exactly.
inline CascadedParams map_to_cascaded(const LinearizedOptomech& params) {
  validate(params);
  const std::complex<double> i_unit{0.0, 1.0};
  CascadedParams cascaded;
  cascaded.omega1 = params.delta1;
  cascaded.omega2 = params.delta2;
  cascaded.gamma1 =
      4.0 * params.coupling1 * params.coupling1 / params.gamma_m;
  cascaded.gamma2 =
      4.0 * params.coupling2 * params.coupling2 / params.gamma_m;
  cascaded.kappa1 = params.kappa1;
  cascaded.kappa2 = params.kappa2;
  cascaded.phi = params.phi;
  cascaded.residual_coupling =
      params.hopping - 2.0 * i_unit * params.coupling1 * params.coupling2 *
                           std::exp(-i_unit * params.phi) / params.gamma_m;
  cascaded.nbar1 = params.nbar1;
  cascaded.nbar2 = params.nbar2;
  cascaded.nbar3 = params.nbar_m;
  validate(cascaded);
  return cascaded;
}

}  // namespace thermoroute
