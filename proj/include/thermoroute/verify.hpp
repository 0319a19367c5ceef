#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "thermoroute/analysis.hpp"
#include "thermoroute/dynamics.hpp"
#include "thermoroute/model.hpp"
#include "thermoroute/optomech.hpp"

namespace thermoroute {

// ===========================================================================
// Built-in acceptance checks
// ===========================================================================
//
// Each check is a self-contained pass/fail experiment over the library's own
// claims, runnable through the CLI (`verify`) and the test suite alike.  The
// checks deliberately recompute their references independently (closed
// forms, analytic limits, alternative solvers) so a single shared bug cannot
// hide from them.

/// Outcome of one acceptance check.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  ///< measured extremes and the tolerances they face
  double seconds = 0.0;
};

namespace detail {

class CheckTimer {
 public:
  CheckTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string brief(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3g", value);
  return std::string(buffer);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> values(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    values[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) /
                 static_cast<double>(count - 1);
  }
  return values;
}

inline std::complex<double> complex_normal(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  return {normal(rng) * 0.7071067811865476, normal(rng) * 0.7071067811865476};
}

/// Damping-consistent random model: M = -(1/2) L L† - i H with Gaussian L
/// and Hermitian H is almost surely strictly stable; moderate stiffness is
/// enforced by redraw so the time-domain oracle stays cheap.
inline DriftModel random_stable_model(std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const Eigen::Index n = uniform_int(rng, 1, 3);
    const Eigen::Index m = uniform_int(rng, static_cast<int>(n), 4);
    Eigen::MatrixXcd noise(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) noise(i, j) = complex_normal(rng);
    }
    Eigen::MatrixXcd raw(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) raw(i, j) = complex_normal(rng);
    }
    const Eigen::MatrixXcd hermitian = 0.5 * (raw + raw.adjoint());

    DriftModel model;
    model.noise_input = noise;
    model.drift = -0.5 * noise * noise.adjoint() -
                  std::complex<double>(0.0, 1.0) * hermitian;
    model.bath_occupancy.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      model.bath_occupancy[j] = uniform(rng, 0.0, 10.0);
    }

    const StabilityReport report = stability_check(model);
    if (!report.stable) continue;
    const double stiffness = model.drift.norm() / -report.max_real_part;
    if (stiffness > 50.0) continue;
    return model;
  }
  throw std::runtime_error("random model generator failed to find a "
                           "moderately stiff stable model");
}

inline CascadedParams random_cascaded(std::mt19937_64& rng) {
  const double pi = 3.14159265358979323846;
  CascadedParams params;
  params.omega1 = uniform(rng, -5.0, 5.0);
  params.omega2 = uniform(rng, -5.0, 5.0);
  params.gamma1 = uniform(rng, 0.1, 10.0);
  params.gamma2 = uniform(rng, 0.1, 10.0);
  params.kappa1 = uniform(rng, 0.1, 10.0);
  params.kappa2 = uniform(rng, 0.1, 10.0);
  params.phi = uniform(rng, -pi, pi);
  params.nbar1 = uniform(rng, 0.0, 500.0);
  params.nbar2 = uniform(rng, 0.0, 500.0);
  params.nbar3 = uniform(rng, 0.0, 500.0);
  return params;
}

inline LinearizedOptomech random_linearized(std::mt19937_64& rng) {
  const double pi = 3.14159265358979323846;
  LinearizedOptomech linear;
  linear.coupling1 = uniform(rng, 0.0, 5.0);
  linear.coupling2 = uniform(rng, 0.0, 5.0);
  linear.phi = uniform(rng, -pi, pi);
  linear.delta1 = uniform(rng, -50.0, 50.0);
  linear.delta2 = uniform(rng, -50.0, 50.0);
  linear.kappa1 = uniform(rng, 0.1, 10.0);
  linear.kappa2 = uniform(rng, 0.1, 10.0);
  linear.omega_m = uniform(rng, 1.0, 100.0);
  linear.gamma_m = uniform(rng, 0.5, 100.0);
  linear.hopping = uniform(rng, -5.0, 5.0);
  linear.nbar1 = uniform(rng, 0.0, 100.0);
  linear.nbar2 = uniform(rng, 0.0, 100.0);
  linear.nbar_m = uniform(rng, 0.0, 100.0);
  return linear;
}

}  // namespace detail

/// Reference formula signature for the symmetric perfect case; the default
/// is the library's own closed_form_dn2.  Injecting a perturbed reference
/// here lets the test suite confirm the check actually has teeth.
using ClosedFormReference = double (*)(double kappa, double delta, double m1,
                                       double m3);

/// Symmetric perfect case over the full published grid: numeric dn2 against
/// the closed form, tolerance 1e-8 scaled, with a 5 s runtime budget.
inline CheckResult check_closed_form_grid(
    ClosedFormReference reference = &closed_form_dn2) {
  CheckResult result;
  result.name = "closed-form-grid";
  const detail::CheckTimer timer;
  try {
    CascadedParams base;
    base.gamma1 = base.gamma2 = base.kappa1 = base.kappa2 = 1.0;
    base.nbar1 = base.nbar2 = 200.0;  // decoupled targets m1 = m2 = 100
    base.nbar3 = 0.0;
    const DecoupledOccupancies targets = decoupled_limit(base);
    const std::vector<double> deltas = detail::linspace(-10.0, 10.0, 101);
    const std::vector<double> m3s = detail::linspace(0.0, 200.0, 101);
    const SweepGrid grid = sweep_grid(base, deltas, m3s, 1);

    double worst = 0.0;
    std::size_t invalid = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      for (std::size_t j = 0; j < m3s.size(); ++j) {
        const SweepCell& cell = grid.cell(i, j);
        if (!cell.valid) {
          ++invalid;
          continue;
        }
        const double expected = reference(1.0, deltas[i], targets.m1, m3s[j]);
        const double deviation =
            std::abs(cell.report.dn2 - expected) / (1.0 + std::abs(expected));
        worst = std::max(worst, deviation);
      }
    }
    const double elapsed = timer.seconds();
    result.passed = invalid == 0 && worst <= 1e-8 && elapsed < 5.0;
    result.detail = "101x101 grid: max scaled |dn2 - closed form| = " +
                    detail::brief(worst) + " (tol 1e-08), " +
                    std::to_string(invalid) + " invalid cells, " +
                    detail::brief(elapsed) + " s (budget 5 s)";
  } catch (const std::exception& failure) {
    result.passed = false;
    result.detail = std::string("aborted: ") + failure.what();
  }
  result.seconds = timer.seconds();
  return result;
}

/// Zero residual coupling must leave mode 1 untouched: |dn1| within
/// 1e-10 * (1 + nbar1 + nbar3) over 100 randomized parameter sets.
inline CheckResult check_perfect_nonreciprocity() {
  CheckResult result;
  result.name = "perfect-nonreciprocity";
  const detail::CheckTimer timer;
  try {
    std::mt19937_64 rng(73);
    double worst_ratio = 0.0;
    double worst_dn1 = 0.0;
    for (int k = 0; k < 100; ++k) {
      CascadedParams params = detail::random_cascaded(rng);
      params.residual_coupling = {0.0, 0.0};
      const RoutingReport report = routing_report(params);
      const double allowance = 1e-10 * (1.0 + params.nbar1 + params.nbar3);
      worst_ratio = std::max(worst_ratio, std::abs(report.dn1) / allowance);
      worst_dn1 = std::max(worst_dn1, std::abs(report.dn1));
    }
    result.passed = worst_ratio <= 1.0;
    result.detail = "100 random sets with zero residual coupling: max |dn1| = " +
                    detail::brief(worst_dn1) +
                    ", worst allowance fraction = " +
                    detail::brief(worst_ratio) +
                    " (tol 1e-10*(1+nbar1+nbar3))";
  } catch (const std::exception& failure) {
    result.passed = false;
    result.detail = std::string("aborted: ") + failure.what();
  }
  result.seconds = timer.seconds();
  return result;
}

/// The analytic decoupled limit against the solver at detuning 1e6, plus the
/// bitwise half-sum identity for symmetric power-of-two rates.
inline CheckResult check_decoupled_limit() {
  CheckResult result;
  result.name = "decoupled-limit";
  const detail::CheckTimer timer;
  try {
    std::mt19937_64 rng(1129);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      CascadedParams params = detail::random_cascaded(rng);
      params.residual_coupling = {detail::uniform(rng, -1.0, 1.0),
                                  detail::uniform(rng, -1.0, 1.0)};
      params.omega1 = 5e5;
      params.omega2 = -5e5;
      const OccupancyMatrix steady =
          lyapunov_steady_state(build_cascaded_drift(params));
      const DecoupledOccupancies limit = decoupled_limit(params);
      worst = std::max(worst, std::abs(steady.occupancy(0) - limit.m1) /
                                  (1.0 + std::abs(limit.m1)));
      worst = std::max(worst, std::abs(steady.occupancy(1) - limit.m2) /
                                  (1.0 + std::abs(limit.m2)));
    }

    int exact_failures = 0;
    for (const double kappa : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      for (int rep = 0; rep < 4; ++rep) {
        CascadedParams params;
        params.gamma1 = params.gamma2 = params.kappa1 = params.kappa2 = kappa;
        params.phi = detail::uniform(rng, -3.0, 3.0);
        params.nbar1 = detail::uniform(rng, 0.0, 500.0);
        params.nbar2 = detail::uniform(rng, 0.0, 500.0);
        params.nbar3 = detail::uniform(rng, 0.0, 500.0);
        const DecoupledOccupancies limit = decoupled_limit(params);
        // Power-of-two rates make every step exact, so the mixture must
        // reproduce the half-sum bit for bit.
        if (limit.m1 != 0.5 * (params.nbar1 + params.nbar3)) ++exact_failures;
        if (limit.m2 != 0.5 * (params.nbar2 + params.nbar3)) ++exact_failures;
      }
    }

    result.passed = worst <= 1e-6 && exact_failures == 0;
    result.detail =
        "50 sets at detuning 1e6: max relative gap = " + detail::brief(worst) +
        " (tol 1e-06); symmetric half-sum bitwise failures = " +
        std::to_string(exact_failures);
  } catch (const std::exception& failure) {
    result.passed = false;
    result.detail = std::string("aborted: ") + failure.what();
  }
  result.seconds = timer.seconds();
  return result;
}

/// Lyapunov vs spectral vs long-time RK4 on randomized stable models:
/// |a - b| <= 1e-6 max(|a|,|b|) + 1e-9 entry-wise, all three pairs.
inline CheckResult check_solver_agreement() {
  CheckResult result;
  result.name = "solver-three-way";
  const detail::CheckTimer timer;
  try {
    std::mt19937_64 rng(4242);
    double worst = 0.0;
    const auto excess = [](const Eigen::MatrixXcd& a,
                           const Eigen::MatrixXcd& b) {
      double ratio = 0.0;
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
          const double gap = std::abs(a(i, j) - b(i, j));
          const double allowance =
              1e-6 * std::max(std::abs(a(i, j)), std::abs(b(i, j))) + 1e-9;
          ratio = std::max(ratio, gap / allowance);
        }
      }
      return ratio;
    };

    for (int k = 0; k < 50; ++k) {
      const DriftModel model = detail::random_stable_model(rng);
      const StabilityReport report = stability_check(model);
      const OccupancyMatrix algebraic = lyapunov_steady_state(model);
      const OccupancyMatrix spectral = spectral_steady_state(model);

      OccupancyMatrix vacuum;
      vacuum.moments = Eigen::MatrixXcd::Zero(model.mode_count(),
                                              model.mode_count());
      const double t_end = 15.0 / -report.max_real_part;
      const double dt = 0.05 / model.drift.norm();
      const OccupancyMatrix evolved =
          time_evolve_moments(model, vacuum, t_end, dt);

      worst = std::max({worst, excess(algebraic.moments, spectral.moments),
                        excess(algebraic.moments, evolved.moments),
                        excess(spectral.moments, evolved.moments)});
    }
    result.passed = worst <= 1.0;
    result.detail =
        "50 random stable models: worst allowance fraction = " +
        detail::brief(worst) + " (tol 1e-06 relative + 1e-09 floor)";
  } catch (const std::exception& failure) {
    result.passed = false;
    result.detail = std::string("aborted: ") + failure.what();
  }
  result.seconds = timer.seconds();
  return result;
}

/// Uniform bath occupancy must thermalize every mode exactly: N = nbar * I
/// to 1e-10 for both the cascaded and three-mode models.
inline CheckResult check_uniform_bath_equilibrium() {
  CheckResult result;
  result.name = "uniform-bath-equilibrium";
  const detail::CheckTimer timer;
  try {
    std::mt19937_64 rng(5150);
    double worst = 0.0;
    for (const double occupancy : {0.0, 0.5, 7.25, 137.0}) {
      for (int rep = 0; rep < 3; ++rep) {
        CascadedParams cascaded;
        for (int attempt = 0; attempt < 100; ++attempt) {
          cascaded = detail::random_cascaded(rng);
          cascaded.residual_coupling = {detail::uniform(rng, -0.5, 0.5),
                                        detail::uniform(rng, -0.5, 0.5)};
          if (stability_check(build_cascaded_drift(cascaded)).stable) break;
        }
        cascaded.nbar1 = cascaded.nbar2 = cascaded.nbar3 = occupancy;
        const OccupancyMatrix steady =
            lyapunov_steady_state(build_cascaded_drift(cascaded));
        worst = std::max(
            worst,
            (steady.moments -
             occupancy * Eigen::MatrixXcd::Identity(2, 2))
                .cwiseAbs()
                .maxCoeff());

        LinearizedOptomech linear;
        for (int attempt = 0; attempt < 100; ++attempt) {
          linear = detail::random_linearized(rng);
          linear.coupling1 = detail::uniform(rng, 0.0, 3.0);
          linear.coupling2 = detail::uniform(rng, 0.0, 3.0);
          if (stability_check(build_three_mode_rwa_drift(linear)).stable) break;
        }
        linear.nbar1 = linear.nbar2 = linear.nbar_m = occupancy;
        const OccupancyMatrix three =
            lyapunov_steady_state(build_three_mode_rwa_drift(linear));
        worst = std::max(
            worst, (three.moments -
                    occupancy * Eigen::MatrixXcd::Identity(3, 3))
                       .cwiseAbs()
                       .maxCoeff());
      }
    }
    result.passed = worst <= 1e-10;
    result.detail =
        "uniform occupancies {0, 0.5, 7.25, 137}: max |N - nbar I| = " +
        detail::brief(worst) + " (tol 1e-10)";
  } catch (const std::exception& failure) {
    result.passed = false;
    result.detail = std::string("aborted: ") + failure.what();
  }
  result.seconds = timer.seconds();
  return result;
}

/// Algebraic identity: eliminating the mechanics at its own resonance must
/// equal the cascaded build of the mapped parameters, entry for entry.
inline CheckResult check_equivalence_algebraic() {
  CheckResult result;
  result.name = "optomech-map-algebraic";
  const detail::CheckTimer timer;
  try {
    std::mt19937_64 rng(6006);
    double worst = 0.0;
    for (int k = 0; k < 25; ++k) {
      const LinearizedOptomech linear = detail::random_linearized(rng);
      const DriftModel reduced = adiabatic_eliminate(linear, linear.omega_m);
      const DriftModel mapped =
          build_cascaded_drift(map_to_cascaded(linear));
      worst = std::max(
          {worst,
           (reduced.drift - mapped.drift).cwiseAbs().maxCoeff(),
           (reduced.noise_input - mapped.noise_input).cwiseAbs().maxCoeff(),
           (reduced.bath_occupancy - mapped.bath_occupancy)
               .cwiseAbs()
               .maxCoeff()});
    }
    result.passed = worst <= 1e-12;
    result.detail =
        "25 random linearized sets: max entry gap (drift, noise, baths) = " +
        detail::brief(worst) + " (tol 1e-12)";
  } catch (const std::exception& failure) {
    result.passed = false;
    result.detail = std::string("aborted: ") + failure.what();
  }
  result.seconds = timer.seconds();
  return result;
}

/// The interference condition phi = pi/2, J = 2 G1 G2 / gamma_m must cancel
/// the residual coupling to machine precision.
inline CheckResult check_equivalence_perfect_coupling() {
  CheckResult result;
  result.name = "optomech-map-perfect-cancellation";
  const detail::CheckTimer timer;
  try {
    std::mt19937_64 rng(7007);
    const double half_pi = 1.5707963267948966;
    double worst = 0.0;
    for (int k = 0; k < 11; ++k) {
      LinearizedOptomech linear;
      linear.coupling1 = k == 0 ? 2.0 : detail::uniform(rng, 0.1, 5.0);
      linear.coupling2 = k == 0 ? 2.0 : detail::uniform(rng, 0.1, 5.0);
      linear.gamma_m = k == 0 ? 40.0 : detail::uniform(rng, 1.0, 100.0);
      linear.phi = half_pi;
      linear.hopping =
          2.0 * linear.coupling1 * linear.coupling2 / linear.gamma_m;
      linear.delta1 = linear.delta2 = linear.omega_m = 10.0;
      linear.kappa1 = linear.kappa2 = 1.0;
      worst = std::max(
          worst, std::abs(map_to_cascaded(linear).residual_coupling));
    }
    result.passed = worst <= 1e-15;
    result.detail = "11 interference-matched sets: max |residual coupling| = " +
                    detail::brief(worst) + " (tol 1e-15)";
  } catch (const std::exception& failure) {
    result.passed = false;
    result.detail = std::string("aborted: ") + failure.what();
  }
  result.seconds = timer.seconds();
  return result;
}

/// Physical agreement in the broadband-mechanics limit: cavity occupancies
/// of the full three-mode model against the mapped cascaded network, within
/// 2% at gamma_m = 1000 kappa.
inline CheckResult check_equivalence_physical() {
  CheckResult result;
  result.name = "optomech-physical-limit";
  const detail::CheckTimer timer;
  try {
    std::vector<LinearizedOptomech> configs;
    {
      LinearizedOptomech linear;  // interference-matched, hot cavity baths
      linear.gamma_m = 1000.0;
      linear.coupling1 = linear.coupling2 =
          0.5 * std::sqrt(1.0 * linear.gamma_m);  // channel rates 1
      linear.phi = 1.5707963267948966;
      linear.hopping =
          2.0 * linear.coupling1 * linear.coupling2 / linear.gamma_m;
      linear.delta1 = linear.delta2 = linear.omega_m = 50.0;
      linear.kappa1 = linear.kappa2 = 1.0;
      linear.nbar1 = 200.0;
      linear.nbar2 = 100.0;
      linear.nbar_m = 0.0;
      configs.push_back(linear);
    }
    {
      LinearizedOptomech linear;  // asymmetric rates, warm channel
      linear.gamma_m = 1000.0;
      linear.coupling1 = 0.5 * std::sqrt(2.0 * linear.gamma_m);
      linear.coupling2 = 0.5 * std::sqrt(0.5 * linear.gamma_m);
      linear.phi = 0.0;
      linear.hopping = 0.0;
      linear.delta1 = linear.delta2 = linear.omega_m = 80.0;
      linear.kappa1 = linear.kappa2 = 1.0;
      linear.nbar1 = 150.0;
      linear.nbar2 = 20.0;
      linear.nbar_m = 5.0;
      configs.push_back(linear);
    }

    double worst = 0.0;
    for (const LinearizedOptomech& linear : configs) {
      const OccupancyMatrix three =
          lyapunov_steady_state(build_three_mode_rwa_drift(linear));
      const RoutingReport mapped = routing_report(map_to_cascaded(linear));
      worst = std::max(worst, std::abs(three.occupancy(0) - mapped.n1) /
                                  std::max(std::abs(mapped.n1), 1e-12));
      worst = std::max(worst, std::abs(three.occupancy(1) - mapped.n2) /
                                  std::max(std::abs(mapped.n2), 1e-12));
    }
    result.passed = worst <= 0.02;
    result.detail =
        "2 broadband configs (gamma_m = 1000 kappa): max relative occupancy "
        "gap = " +
        detail::brief(worst) + " (tol 0.02)";
  } catch (const std::exception& failure) {
    result.passed = false;
    result.detail = std::string("aborted: ") + failure.what();
  }
  result.seconds = timer.seconds();
  return result;
}

/// Structural sweep claim for the perfect network: dn2 changes sign exactly
/// at the channel occupancy matching the mode-1 target, on every detuning
/// column of the published grid.
inline CheckResult check_sweep_zero_crossing() {
  CheckResult result;
  result.name = "sweep-zero-crossing";
  const detail::CheckTimer timer;
  try {
    CascadedParams base;  // kappa2 = 3 keeps every back-solved bath physical
    base.gamma1 = base.gamma2 = 1.0;
    base.kappa1 = 1.0;
    base.kappa2 = 3.0;
    base.nbar1 = 200.0;        // target m1 = 100
    base.nbar2 = 200.0 / 3.0;  // target m2 = 50
    base.nbar3 = 0.0;
    const std::vector<double> deltas = detail::linspace(-10.0, 10.0, 101);
    const std::vector<double> m3s = detail::linspace(0.0, 200.0, 101);
    const std::size_t center = 50;  // m3 = 100, the m1 target
    const SweepGrid grid = sweep_grid(base, deltas, m3s, 1);

    std::size_t invalid = 0;
    double min_below = std::numeric_limits<double>::infinity();
    double max_above = -std::numeric_limits<double>::infinity();
    double worst_center = 0.0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      for (std::size_t j = 0; j < m3s.size(); ++j) {
        const SweepCell& cell = grid.cell(i, j);
        if (!cell.valid) {
          ++invalid;
          continue;
        }
        if (j < center) min_below = std::min(min_below, cell.report.dn2);
        if (j > center) max_above = std::max(max_above, cell.report.dn2);
        if (j == center) {
          worst_center = std::max(worst_center, std::abs(cell.report.dn2));
        }
      }
    }
    const double center_tolerance = 1e-8 * 101.0;  // scale of m1 target
    result.passed = invalid == 0 && min_below > 0.0 && max_above < 0.0 &&
                    worst_center <= center_tolerance;
    result.detail = "dn2 > 0 below the crossing (min " +
                    detail::brief(min_below) + "), < 0 above (max " +
                    detail::brief(max_above) + "), |dn2| at the crossing = " +
                    detail::brief(worst_center) + " (tol " +
                    detail::brief(center_tolerance) + "), " +
                    std::to_string(invalid) + " invalid cells";
  } catch (const std::exception& failure) {
    result.passed = false;
    result.detail = std::string("aborted: ") + failure.what();
  }
  result.seconds = timer.seconds();
  return result;
}

/// With residual coupling of one linewidth the one-way protection must leak
/// into mode 1, while mode 2 still shows routed noise of both signs.
inline CheckResult check_sweep_imperfect_leak() {
  CheckResult result;
  result.name = "sweep-imperfect-leak";
  const detail::CheckTimer timer;
  try {
    CascadedParams base;
    base.gamma1 = base.gamma2 = base.kappa1 = base.kappa2 = 1.0;
    base.residual_coupling = {1.0, 0.0};  // = kappa
    base.nbar1 = 200.0;  // target m1 = 100
    base.nbar2 = 100.0;  // target m2 = 50
    base.nbar3 = 0.0;
    const std::vector<double> deltas = detail::linspace(-10.0, 10.0, 101);
    const std::vector<double> m3s = detail::linspace(0.0, 200.0, 101);
    const SweepGrid grid = sweep_grid(base, deltas, m3s, 1);

    std::size_t valid = 0;
    std::size_t invalid = 0;
    double max_abs_dn1 = 0.0;
    double max_dn2 = -std::numeric_limits<double>::infinity();
    double min_dn2 = std::numeric_limits<double>::infinity();
    for (const SweepCell& cell : grid.cells) {
      if (!cell.valid) {
        ++invalid;
        continue;
      }
      ++valid;
      max_abs_dn1 = std::max(max_abs_dn1, std::abs(cell.report.dn1));
      max_dn2 = std::max(max_dn2, cell.report.dn2);
      min_dn2 = std::min(min_dn2, cell.report.dn2);
    }
    result.passed = valid > 0 && max_abs_dn1 > 1e-6 && max_dn2 > 1e-6 &&
                    min_dn2 < -1e-6;
    result.detail = "residual coupling = kappa: max |dn1| = " +
                    detail::brief(max_abs_dn1) +
                    " (must exceed 1e-06), dn2 spans [" +
                    detail::brief(min_dn2) + ", " + detail::brief(max_dn2) +
                    "] (both signs required), " + std::to_string(valid) +
                    " valid / " + std::to_string(invalid) + " invalid cells";
  } catch (const std::exception& failure) {
    result.passed = false;
    result.detail = std::string("aborted: ") + failure.what();
  }
  result.seconds = timer.seconds();
  return result;
}

/// The classical working point must satisfy its own defining equations, and
/// the zero-coupling limit must reproduce the bare-cavity response.
inline CheckResult check_linearization_consistency() {
  CheckResult result;
  result.name = "linearization-self-consistency";
  const detail::CheckTimer timer;
  try {
    const std::complex<double> i_unit{0.0, 1.0};

    OptomechParams desk;  // weak coupling, strong drive, resonant
    desk.delta1 = desk.delta2 = 100.0;
    desk.kappa1 = desk.kappa2 = 1.0;
    desk.omega_m = 100.0;
    desk.gamma_m = 40.0;
    desk.hopping = 0.0;
    DrivenCoupling driven;
    driven.g1 = driven.g2 = 1e-3;
    driven.drive1 = driven.drive2 = {1000.0, 0.0};
    desk.coupling = driven;
    const ClassicalSteadyState point = classical_steady_state(desk);

    // Independent substitution of the reported amplitudes into the
    // fixed-point equations, written out again as the oracle.
    const double shift = 2.0 * point.beta.real();
    const auto cavity_gap = [&](std::complex<double> self, double delta,
                                double g, double kappa,
                                std::complex<double> other,
                                std::complex<double> drive) {
      return (i_unit * (delta + g * shift) + 0.5 * kappa) * self +
             i_unit * desk.hopping * other + i_unit * drive;
    };
    const double radiation = driven.g1 * std::norm(point.alpha1) +
                             driven.g2 * std::norm(point.alpha2);
    const std::complex<double> mechanical_gap =
        (i_unit * desk.omega_m + 0.5 * desk.gamma_m) * point.beta +
        i_unit * radiation;
    const double scale = 1.0 + std::abs(driven.drive1) +
                         (desk.omega_m + desk.gamma_m) * std::abs(point.beta);
    const double recheck =
        std::max({std::abs(cavity_gap(point.alpha1, desk.delta1, driven.g1,
                                      desk.kappa1, point.alpha2,
                                      driven.drive1)),
                  std::abs(cavity_gap(point.alpha2, desk.delta2, driven.g2,
                                      desk.kappa2, point.alpha1,
                                      driven.drive2)),
                  std::abs(mechanical_gap)}) /
        scale;

    OptomechParams bare;  // no optomechanical coupling at all
    bare.delta1 = 3.0;
    bare.delta2 = -2.0;
    bare.kappa1 = 1.0;
    bare.kappa2 = 2.5;
    bare.omega_m = 7.0;
    bare.gamma_m = 2.0;
    bare.hopping = 0.0;
    DrivenCoupling uncoupled;
    uncoupled.g1 = uncoupled.g2 = 0.0;
    uncoupled.drive1 = {300.0, 400.0};
    uncoupled.drive2 = {-500.0, 120.0};
    bare.coupling = uncoupled;
    const ClassicalSteadyState linear_point = classical_steady_state(bare);
    const auto bare_amplitude = [&](std::complex<double> drive, double delta,
                                    double kappa) {
      return -i_unit * drive / (i_unit * delta + 0.5 * kappa);
    };
    const std::complex<double> expected1 =
        bare_amplitude(uncoupled.drive1, bare.delta1, bare.kappa1);
    const std::complex<double> expected2 =
        bare_amplitude(uncoupled.drive2, bare.delta2, bare.kappa2);
    const double bare_gap = std::max(
        {std::abs(linear_point.alpha1 - expected1) / (1.0 + std::abs(expected1)),
         std::abs(linear_point.alpha2 - expected2) /
             (1.0 + std::abs(expected2)),
         std::abs(linear_point.beta)});

    result.passed = point.residual <= 1e-10 && recheck <= 1e-10 &&
                    bare_gap <= 1e-12;
    result.detail = "desk-scale fixed point: reported residual = " +
                    detail::brief(point.residual) + ", substitution gap = " +
                    detail::brief(recheck) +
                    " (tol 1e-10); zero-coupling amplitude gap = " +
                    detail::brief(bare_gap) + " (tol 1e-12)";
  } catch (const std::exception& failure) {
    result.passed = false;
    result.detail = std::string("aborted: ") + failure.what();
  }
  result.seconds = timer.seconds();
  return result;
}

/// Runs every acceptance check and appends the overall runtime budget as a
/// final synthetic check.
inline std::vector<CheckResult> run_acceptance_checks() {
  std::vector<CheckResult> results;
  results.push_back(check_closed_form_grid());
  results.push_back(check_perfect_nonreciprocity());
  results.push_back(check_decoupled_limit());
  results.push_back(check_solver_agreement());
  results.push_back(check_uniform_bath_equilibrium());
  results.push_back(check_equivalence_algebraic());
  results.push_back(check_equivalence_perfect_coupling());
  results.push_back(check_equivalence_physical());
  results.push_back(check_sweep_zero_crossing());
  results.push_back(check_sweep_imperfect_leak());
  results.push_back(check_linearization_consistency());

  double total = 0.0;
  for (const CheckResult& result : results) total += result.seconds;
  CheckResult budget;
  budget.name = "runtime-budget";
  budget.passed = total < 60.0;
  budget.detail =
      "all checks completed in " + detail::brief(total) + " s (budget 60 s)";
  budget.seconds = total;
  results.push_back(budget);
  return results;
}

}  // namespace thermoroute
