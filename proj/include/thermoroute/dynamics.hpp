#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "thermoroute/model.hpp"

namespace thermoroute {

// ===========================================================================
// First-moment dynamics
// ===========================================================================

/// Linear quantum Langevin model dc/dt = M c + L c_in for n modes driven by
/// m >= n independent baths.  Row i of `noise_input` holds the amplitudes
/// with which each bath enters mode i; `bath_occupancy` holds the thermal
/// occupancy of each bath.
struct DriftModel {
  Eigen::MatrixXcd drift;        ///< M, n x n
  Eigen::MatrixXcd noise_input;  ///< L, n x m
  Eigen::VectorXd bath_occupancy;  ///< nbar, length m

  Eigen::Index mode_count() const { return drift.rows(); }
  Eigen::Index bath_count() const { return noise_input.cols(); }

  /// Thermal diffusion matrix Q = conj(L) diag(nbar) L^T entering the
  /// normal-ordered moment equation d<c†c>/dt = conj(M) N + N M^T + Q.
  Eigen::MatrixXcd diffusion() const {
    return noise_input.conjugate() *
           bath_occupancy.cast<std::complex<double>>().asDiagonal() *
           noise_input.transpose();
  }
};

/// Checks shapes and finiteness of `model` and returns it unchanged.  Throws
/// std::invalid_argument on the first inconsistency.
inline const DriftModel& validate(const DriftModel& model) {
  const Eigen::Index n = model.drift.rows();
  if (n < 1 || model.drift.cols() != n) {
    throw std::invalid_argument("drift must be square and non-empty");
  }
  if (model.noise_input.rows() != n || model.noise_input.cols() < 1) {
    throw std::invalid_argument(
        "noise_input must have one row per mode and at least one bath column");
  }
  if (model.bath_occupancy.size() != model.noise_input.cols()) {
    throw std::invalid_argument(
        "bath_occupancy length must match the number of bath columns");
  }
  if (!model.drift.allFinite() || !model.noise_input.allFinite()) {
    throw std::invalid_argument("drift and noise_input must be finite");
  }
  for (Eigen::Index i = 0; i < model.bath_occupancy.size(); ++i) {
    detail::require_nonnegative(model.bath_occupancy[i],
                                "bath_occupancy[" + std::to_string(i) + "]");
  }
  return model;
}

/// Largest entry of M + M† + L L†, scaled by 1 + ||L L†||max.  Zero (to
/// roundoff) whenever every decay channel written into M is accounted for by
/// a bath column of L, which is what makes a uniform-temperature environment
/// thermalize the modes exactly.
inline double damping_consistency_residual(const DriftModel& model) {
  validate(model);
  const Eigen::MatrixXcd dissipator =
      model.noise_input * model.noise_input.adjoint();
  const double scale = 1.0 + dissipator.cwiseAbs().maxCoeff();
  return (model.drift + model.drift.adjoint() + dissipator)
             .cwiseAbs()
             .maxCoeff() /
         scale;
}

/// Assembles the two-mode cascaded model.  The shared channel drives mode 2
/// with mode 1's output (and never the reverse), so the drift picks up the
/// one-way term -sqrt(gamma1 gamma2) e^{i phi} below the diagonal while both
/// modes stay coupled to the same channel noise column.
inline DriftModel build_cascaded_drift(const CascadedParams& params) {
  validate(params);
  const std::complex<double> i_unit{0.0, 1.0};
  const std::complex<double> channel_phase =
      std::exp(i_unit * params.phi);
  const std::complex<double> coupling = params.residual_coupling;

  DriftModel model;
  model.drift.resize(2, 2);
  model.drift(0, 0) = -i_unit * params.omega1 -
                      0.5 * (params.gamma1 + params.kappa1);
  model.drift(0, 1) = -i_unit * coupling;
  model.drift(1, 0) = -i_unit * std::conj(coupling) -
                      std::sqrt(params.gamma1 * params.gamma2) * channel_phase;
  model.drift(1, 1) = -i_unit * params.omega2 -
                      0.5 * (params.gamma2 + params.kappa2);

  model.noise_input.setZero(2, 3);
  model.noise_input(0, 0) = std::sqrt(params.kappa1);
  model.noise_input(1, 1) = std::sqrt(params.kappa2);
  model.noise_input(0, 2) = std::sqrt(params.gamma1);
  model.noise_input(1, 2) = std::sqrt(params.gamma2) * channel_phase;

  model.bath_occupancy.resize(3);
  model.bath_occupancy << params.nbar1, params.nbar2, params.nbar3;
  return model;
}

// ===========================================================================
// Stability
// ===========================================================================

/// Spectrum of the drift matrix together with the stability verdict.
struct StabilityReport {
  Eigen::VectorXcd eigenvalues;
  double max_real_part = 0.0;
  double threshold = 0.0;  ///< -1e-12 * ||M||_F; stable iff max_real_part < threshold
  bool stable = false;
};

/// Classifies the drift spectrum.  The margin scales with ||M||_F so that a
/// marginal eigenvalue produced by cancellation of large entries is still
/// flagged as unstable rather than trusted.
inline StabilityReport stability_check(const DriftModel& model) {
  validate(model);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(model.drift, false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue computation for drift failed");
  }
  StabilityReport report;
  report.eigenvalues = solver.eigenvalues();
  report.max_real_part = report.eigenvalues.real().maxCoeff();
  report.threshold = -1e-12 * model.drift.norm();
  report.stable = report.max_real_part < report.threshold;
  return report;
}

// ===========================================================================
// Steady-state second moments
// ===========================================================================

/// Normal-ordered second moments N(i, j) = <c_i† c_j>.  Hermitian and
/// positive semidefinite up to solver roundoff; solvers return the raw result
/// so the residuals stay observable.
struct OccupancyMatrix {
  Eigen::MatrixXcd moments;

  /// Mean occupancy of mode i (real part of the diagonal entry).
  double occupancy(Eigen::Index i) const { return moments(i, i).real(); }

  /// ||N - N†||max, a direct measure of solver self-consistency.
  double hermiticity_residual() const {
    return (moments - moments.adjoint()).cwiseAbs().maxCoeff();
  }
};

/// All mode occupancies as a real vector.
inline Eigen::VectorXd mode_occupancies(const OccupancyMatrix& moments) {
  return moments.moments.diagonal().real();
}

/// Steady state of conj(M) N + N M^T + Q = 0 by column-major vectorization:
/// (I kron conj(M) + M kron I) vec(N) = -vec(Q).  Demands a stable drift and
/// verifies the linear-system residual afterwards, so a silently singular
/// system cannot produce a plausible-looking N.
inline OccupancyMatrix lyapunov_steady_state(const DriftModel& model) {
  const StabilityReport stability = stability_check(model);
  if (!stability.stable) {
    throw std::domain_error(
        "no steady state: drift spectrum reaches Re(lambda) = " +
        std::to_string(stability.max_real_part) + " against threshold " +
        std::to_string(stability.threshold));
  }

  const Eigen::Index n = model.mode_count();
  const Eigen::MatrixXcd drift_conj = model.drift.conjugate();
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(n, n);

  Eigen::MatrixXcd system = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (Eigen::Index col = 0; col < n; ++col) {
    for (Eigen::Index row = 0; row < n; ++row) {
      // Block (row, col) of I kron conj(M) + M kron I.
      system.block(row * n, col * n, n, n) =
          model.drift(row, col) * identity;
      if (row == col) system.block(row * n, col * n, n, n) += drift_conj;
    }
  }

  const Eigen::MatrixXcd diffusion = model.diffusion();
  const Eigen::VectorXcd rhs =
      -Eigen::Map<const Eigen::VectorXcd>(diffusion.data(), n * n);
  const Eigen::VectorXcd solution = system.colPivHouseholderQr().solve(rhs);

  const double residual = (system * solution - rhs).norm();
  const double scale = system.norm() * solution.norm() + rhs.norm();
  if (!solution.allFinite() || residual > 1e-8 * (1.0 + scale)) {
    throw std::runtime_error(
        "vectorized steady-state solve left residual " +
        std::to_string(residual) + " (scale " + std::to_string(scale) +
        "); the system is numerically singular");
  }

  OccupancyMatrix result;
  result.moments = Eigen::Map<const Eigen::MatrixXcd>(solution.data(), n, n);
  return result;
}

/// Convergence record of the spectral integration.
struct SpectralDiagnostics {
  double window = 0.0;             ///< half-width W of the directly sampled band
  double tail_contribution = 0.0;  ///< Frobenius norm actually carried by |omega| > W
  double tail_bound = 0.0;         ///< analytic O(1/W) bound on that contribution
  double relative_error = 0.0;     ///< quadrature error estimate / accumulated L1 mass
};

namespace detail {

/// Evaluator for the spectral density
/// (1/2pi) conj(chi L) diag(nbar) (chi L)^T with chi = (-i omega I - M)^{-1}.
/// All workspace (including the LU) is reused across evaluations, so the
/// quadrature's inner loop performs no allocation.
class SpectralIntegrand {
 public:
  explicit SpectralIntegrand(const DriftModel& model)
      : drift_(model.drift),
        noise_(model.noise_input),
        occupancy_(model.bath_occupancy.cast<std::complex<double>>()),
        shifted_(drift_.rows(), drift_.cols()),
        lu_(drift_.rows()),
        filtered_(noise_.rows(), noise_.cols()),
        weighted_(noise_.rows(), noise_.cols()),
        value_(drift_.rows(), drift_.cols()) {}

  /// Returns a reference into internal workspace, valid until the next call.
  const Eigen::MatrixXcd& operator()(double omega) {
    const std::complex<double> i_unit{0.0, 1.0};
    shifted_ = -drift_;
    shifted_.diagonal().array() -= i_unit * omega;
    lu_.compute(shifted_);
    filtered_ = lu_.solve(noise_);
    weighted_.noalias() = filtered_.conjugate() * occupancy_.asDiagonal();
    value_.noalias() = weighted_ * filtered_.transpose();
    const double inv_two_pi = 0.15915494309189533577;
    value_ *= inv_two_pi;
    return value_;
  }

 private:
  Eigen::MatrixXcd drift_;
  Eigen::MatrixXcd noise_;
  Eigen::VectorXcd occupancy_;
  Eigen::MatrixXcd shifted_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  Eigen::MatrixXcd filtered_;
  Eigen::MatrixXcd weighted_;
  Eigen::MatrixXcd value_;
};

/// One 15-point Gauss-Kronrod application of the matrix-valued density over
/// a sub-interval.  `error` is the embedded Gauss-7 difference and `mass`
/// the quadrature-weighted L1 norm, both measured with the max-magnitude
/// entry norm so every entry shares one refinement criterion.
struct SpectralPanel {
  double lower = 0.0;
  double upper = 0.0;
  Eigen::MatrixXcd integral;
  double error = 0.0;
  double mass = 0.0;
};

/// Applies the GK15 rule (Boost's nodes and weights) once over
/// [lower, upper].  The sampler may return by reference into reused
/// workspace; every returned matrix is consumed before the next call.
template <typename Sampler>
SpectralPanel evaluate_spectral_panel(Sampler&& sample, double lower,
                                      double upper) {
  using kronrod_rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  using gauss_rule = boost::math::quadrature::gauss<double, 7>;
  // Non-negative halves of the symmetric rules; nodes[0] == 0, the odd
  // indices are Kronrod-only nodes and the even ones the embedded Gauss-7
  // nodes (weights at index i / 2).
  const auto& nodes = kronrod_rule::abscissa();
  const auto& kronrod_weights = kronrod_rule::weights();
  const auto& gauss_weights = gauss_rule::weights();

  const double center = 0.5 * (lower + upper);
  const double half_width = 0.5 * (upper - lower);

  SpectralPanel panel;
  panel.lower = lower;
  panel.upper = upper;

  const Eigen::MatrixXcd& center_value = sample(center);
  Eigen::MatrixXcd kronrod_sum = kronrod_weights[0] * center_value;
  Eigen::MatrixXcd gauss_sum = gauss_weights[0] * center_value;
  double mass = kronrod_weights[0] * center_value.cwiseAbs().maxCoeff();

  Eigen::MatrixXcd pair_sum(kronrod_sum.rows(), kronrod_sum.cols());
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double offset = half_width * nodes[i];
    pair_sum = sample(center + offset);
    double pair_mass = pair_sum.cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd& minus_value = sample(center - offset);
    pair_mass += minus_value.cwiseAbs().maxCoeff();
    pair_sum += minus_value;
    kronrod_sum += kronrod_weights[i] * pair_sum;
    mass += kronrod_weights[i] * pair_mass;
    if (i % 2 == 0) gauss_sum += gauss_weights[i / 2] * pair_sum;
  }

  panel.integral = half_width * kronrod_sum;
  panel.error = half_width * (kronrod_sum - gauss_sum).cwiseAbs().maxCoeff();
  panel.mass = half_width * mass;
  return panel;
}

/// Globally adaptive integration of one region: always bisects the panel
/// with the largest error until the summed error drops under `tolerance`
/// times the summed mass.  A single refinement tree serves the whole
/// matrix, so entries whose integrals cancel to zero cannot stall it, and
/// the panel budget bounds the worst case.  Accumulates into the totals.
template <typename Sampler>
void integrate_spectral_region(Sampler&& sample, double lower, double upper,
                               const std::vector<double>& interior_seeds,
                               Eigen::MatrixXcd* integral, double* error_total,
                               double* mass_total) {
  // Panel boundaries: the region's ends plus any feature seeds inside it.
  std::vector<double> boundaries{lower, upper};
  for (const double seed : interior_seeds) {
    if (seed > lower && seed < upper) boundaries.push_back(seed);
  }
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()),
                   boundaries.end());

  const auto by_error = [](const SpectralPanel& a, const SpectralPanel& b) {
    return a.error < b.error;
  };
  std::priority_queue<SpectralPanel, std::vector<SpectralPanel>,
                      decltype(by_error)>
      active(by_error);
  std::vector<SpectralPanel> settled;

  double region_error = 0.0;
  double region_mass = 0.0;
  const auto admit = [&](SpectralPanel&& panel) {
    region_error += panel.error;
    region_mass += panel.mass;
    active.push(std::move(panel));
  };
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    admit(evaluate_spectral_panel(sample, boundaries[i], boundaries[i + 1]));
  }

  // 1e-11 leaves two orders of margin under the caller's 1e-8 error gate;
  // the budget (~30 matrix samples per panel) caps the cost of a refusal.
  const double tolerance = 1e-11;
  const std::size_t panel_budget = 20000;
  const double width_floor = (upper - lower) * 0x1p-44;
  std::size_t panels_evaluated = boundaries.size() - 1;

  while (!active.empty() &&
         region_error >
             tolerance *
                 std::max(region_mass, std::numeric_limits<double>::min()) &&
         panels_evaluated < panel_budget) {
    const SpectralPanel worst = active.top();
    active.pop();
    const double midpoint = 0.5 * (worst.lower + worst.upper);
    if (worst.upper - worst.lower < width_floor ||
        !(worst.lower < midpoint && midpoint < worst.upper)) {
      settled.push_back(worst);  // cannot usefully bisect further
      continue;
    }
    region_error -= worst.error;
    region_mass -= worst.mass;
    admit(evaluate_spectral_panel(sample, worst.lower, midpoint));
    admit(evaluate_spectral_panel(sample, midpoint, worst.upper));
    panels_evaluated += 2;
  }

  while (!active.empty()) {
    settled.push_back(active.top());
    active.pop();
  }
  for (const SpectralPanel& panel : settled) *integral += panel.integral;
  *error_total += region_error;
  *mass_total += region_mass;
}

}  // namespace detail

/// Steady state by frequency integration of the noise spectrum,
/// N = integral d omega / 2pi of conj(chi L) diag(nbar) (chi L)^T.
///
/// The band [-W, W] with W = max|Im lambda| + 50 max|Re lambda| (floored at
/// 2 ||M||_F) is integrated directly with the adaptive Gauss-Kronrod rule,
/// every matrix entry sharing one globally adaptive refinement seeded at
/// the drift resonances; each Lorentzian still carries O(1%) of its weight
/// beyond such a window, far above the 1e-8 target, so the tails are folded
/// in exactly through the substitution omega -> 1/u instead of being
/// truncated.  The O(1/W) bound on the tail weight is reported alongside
/// the actual tail contribution.
inline OccupancyMatrix spectral_steady_state(
    const DriftModel& model, SpectralDiagnostics* diagnostics = nullptr) {
  const StabilityReport stability = stability_check(model);
  if (!stability.stable) {
    throw std::domain_error(
        "no steady state: drift spectrum reaches Re(lambda) = " +
        std::to_string(stability.max_real_part) + " against threshold " +
        std::to_string(stability.threshold));
  }

  const double max_abs_imag =
      stability.eigenvalues.imag().cwiseAbs().maxCoeff();
  const double max_abs_real =
      stability.eigenvalues.real().cwiseAbs().maxCoeff();
  const double drift_norm = model.drift.norm();
  const double window =
      std::max(max_abs_imag + 50.0 * max_abs_real, 2.0 * drift_norm);

  detail::SpectralIntegrand integrand(model);

  const Eigen::Index n = model.mode_count();
  Eigen::MatrixXcd band = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd tails = Eigen::MatrixXcd::Zero(n, n);
  double error_total = 0.0;
  double mass_total = 0.0;

  const auto band_sample = [&](double omega) -> const Eigen::MatrixXcd& {
    return integrand(omega);
  };
  // omega = 1/u compresses each infinite tail onto (0, 1/W]; the mapped
  // integrand tends to the finite constant (1/2pi) (conj(L) diag(nbar) L^T)
  // as u -> 0, so the full tail is ordinary quadrature, not an estimate.
  const auto tail_sample = [&](double u) {
    const double omega = 1.0 / u;
    return Eigen::MatrixXcd(integrand(omega) * (omega * omega));
  };
  const auto mirrored_tail_sample = [&](double u) {
    const double omega = -1.0 / u;
    return Eigen::MatrixXcd(integrand(omega) * (omega * omega));
  };

  // chi^{-1}(omega) = -i omega I - M is near-singular where omega matches a
  // drift resonance: a Lorentzian centered at -Im(lambda) with half-width
  // |Re(lambda)|.  Aligning initial panel boundaries to those features
  // guarantees the first error estimates already see every peak.
  std::vector<double> band_seeds;
  band_seeds.reserve(3 * static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < stability.eigenvalues.size(); ++k) {
    const double center = -stability.eigenvalues[k].imag();
    const double width = std::abs(stability.eigenvalues[k].real());
    band_seeds.push_back(center - 5.0 * width);
    band_seeds.push_back(center);
    band_seeds.push_back(center + 5.0 * width);
  }
  detail::integrate_spectral_region(band_sample, -window, window, band_seeds,
                                    &band, &error_total, &mass_total);

  const std::vector<double> tail_seeds{0.5 / window};
  detail::integrate_spectral_region(tail_sample, 0.0, 1.0 / window,
                                    tail_seeds, &tails, &error_total,
                                    &mass_total);
  detail::integrate_spectral_region(mirrored_tail_sample, 0.0, 1.0 / window,
                                    tail_seeds, &tails, &error_total,
                                    &mass_total);

  const double relative_error =
      error_total / std::max(mass_total, std::numeric_limits<double>::min());
  if (relative_error > 1e-8) {
    throw std::runtime_error(
        "spectral quadrature stalled at relative error " +
        std::to_string(relative_error) + " (target 1e-8)");
  }

  if (diagnostics != nullptr) {
    diagnostics->window = window;
    diagnostics->tail_contribution = tails.norm();
    const double max_occupancy = model.bath_occupancy.maxCoeff();
    const double margin = window - drift_norm;
    const double inv_pi = 0.31830988618367168;  // 1/pi
    diagnostics->tail_bound =
        margin > 0.0 ? model.noise_input.squaredNorm() * max_occupancy *
                           inv_pi / margin
                     : std::numeric_limits<double>::infinity();
    diagnostics->relative_error = relative_error;
  }

  OccupancyMatrix result;
  result.moments = band + tails;
  return result;
}

/// Integrates dN/dt = conj(M) N + N M^T + Q from `initial` with classic
/// fixed-step RK4, landing exactly on t_end.  Divergence past 1e12 times the
/// combined initial/bath scale aborts with the time of failure — the caller
/// either fed an unstable drift or an unreasonable step.
inline OccupancyMatrix time_evolve_moments(const DriftModel& model,
                                           const OccupancyMatrix& initial,
                                           double t_end, double dt) {
  validate(model);
  const Eigen::Index n = model.mode_count();
  if (initial.moments.rows() != n || initial.moments.cols() != n) {
    throw std::invalid_argument("initial moments must be mode_count square");
  }
  if (!initial.moments.allFinite()) {
    throw std::invalid_argument("initial moments must be finite");
  }
  detail::require_nonnegative(t_end, "t_end");
  detail::require_positive(dt, "dt");

  const Eigen::MatrixXcd drift_conj = model.drift.conjugate();
  const Eigen::MatrixXcd drift_t = model.drift.transpose();
  const Eigen::MatrixXcd diffusion = model.diffusion();
  const auto derivative = [&](const Eigen::MatrixXcd& state) {
    return (drift_conj * state + state * drift_t + diffusion).eval();
  };

  const double bath_scale = model.bath_occupancy.size() > 0
                                ? model.bath_occupancy.maxCoeff()
                                : 0.0;
  const double blow_up =
      1e12 *
      (1.0 + initial.moments.cwiseAbs().maxCoeff() + bath_scale);

  Eigen::MatrixXcd state = initial.moments;
  double time = 0.0;
  while (time < t_end) {
    const double step = std::min(dt, t_end - time);
    const Eigen::MatrixXcd k1 = derivative(state);
    const Eigen::MatrixXcd k2 = derivative(state + 0.5 * step * k1);
    const Eigen::MatrixXcd k3 = derivative(state + 0.5 * step * k2);
    const Eigen::MatrixXcd k4 = derivative(state + step * k3);
    state += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    time += step;
    if (!state.allFinite() || state.cwiseAbs().maxCoeff() > blow_up) {
      throw std::runtime_error(
          "moment integration diverged at t = " + std::to_string(time) +
          "; the drift is unstable or the step too coarse");
    }
  }

  OccupancyMatrix result;
  result.moments = state;
  return result;
}

}  // namespace thermoroute
