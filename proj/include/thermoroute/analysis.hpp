#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermoroute/dynamics.hpp"
#include "thermoroute/model.hpp"

namespace thermoroute {

// ===========================================================================
// Decoupled limit and routing quantities
// ===========================================================================

/// Occupancies each mode relaxes to once the mutual detuning is taken large
/// enough that the inter-mode couplings average out.
struct DecoupledOccupancies {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;  ///< the shared channel keeps its bath occupancy
};

/// Large-detuning occupancies: each mode sees only the rate-weighted mixture
/// of its private bath and the shared channel,
/// m_i = (kappa_i nbar_i + gamma_i nbar3) / (kappa_i + gamma_i), m3 = nbar3.
inline DecoupledOccupancies decoupled_limit(const CascadedParams& params) {
  validate(params);
  const auto mixture = [&](double kappa, double nbar, int mode) {
    const double total = kappa + (mode == 1 ? params.gamma1 : params.gamma2);
    if (total <= 0.0) {
      throw std::domain_error("mode " + std::to_string(mode) +
                              " couples to no bath; its decoupled occupancy "
                              "is undefined");
    }
    const double gamma = mode == 1 ? params.gamma1 : params.gamma2;
    return (kappa * nbar + gamma * params.nbar3) / total;
  };
  DecoupledOccupancies limit;
  limit.m1 = mixture(params.kappa1, params.nbar1, 1);
  limit.m2 = mixture(params.kappa2, params.nbar2, 2);
  limit.m3 = params.nbar3;
  return limit;
}

/// Steady occupancies against their decoupled-limit references.  dn_i is the
/// noise the coupling routes into mode i on top of what its own baths supply.
struct RoutingReport {
  double n1 = 0.0;
  double n2 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double dn1 = 0.0;
  double dn2 = 0.0;
};

/// Full routing analysis of one parameter point: Lyapunov steady state for
/// the n_i, analytic decoupled limit for the m_i, dn_i by subtraction.
/// Propagates the solver's no-steady-state error for unstable parameters.
inline RoutingReport routing_report(const CascadedParams& params) {
  const OccupancyMatrix steady =
      lyapunov_steady_state(build_cascaded_drift(params));
  const DecoupledOccupancies limit = decoupled_limit(params);
  RoutingReport report;
  report.n1 = steady.occupancy(0);
  report.n2 = steady.occupancy(1);
  report.m1 = limit.m1;
  report.m2 = limit.m2;
  report.m3 = limit.m3;
  report.dn1 = report.n1 - report.m1;
  report.dn2 = report.n2 - report.m2;
  return report;
}

/// Routed noise in mode 2 for the fully symmetric perfect case
/// (kappa_i = gamma_i = kappa, residual coupling zero):
/// dn2 = 2 kappa^2 / (4 kappa^2 + delta^2) * (m1 - m3).
inline double closed_form_dn2(double kappa, double delta, double m1,
                              double m3) {
  detail::require_positive(kappa, "kappa");
  detail::require_finite(delta, "delta");
  detail::require_finite(m1, "m1");
  detail::require_finite(m3, "m3");
  const double kappa_sq = kappa * kappa;
  return 2.0 * kappa_sq / (4.0 * kappa_sq + delta * delta) * (m1 - m3);
}

// ===========================================================================
// Parameter sweep
// ===========================================================================

/// One grid point of a sweep.  Invalid cells carry the reason instead of
/// numbers (typically a back-solved bath occupancy that would be negative).
struct SweepCell {
  RoutingReport report{};
  bool valid = false;
  std::string error;
};

/// Routing reports over a (detuning, channel-occupancy) grid, row-major with
/// the detuning as the slow axis.
struct SweepGrid {
  std::vector<double> delta_values;
  std::vector<double> m3_values;
  CascadedParams fixed;  ///< the template every cell shares
  std::vector<SweepCell> cells;

  const SweepCell& cell(std::size_t delta_index, std::size_t m3_index) const {
    return cells.at(delta_index * m3_values.size() + m3_index);
  }
};

namespace detail {

/// Builds the parameter point for one sweep cell: detuning split
/// symmetrically across the modes, channel bath set to m3, and the private
/// bath occupancies back-solved so the decoupled-limit targets of the
/// template stay fixed while m3 moves.  Returns false (with a reason) when
/// the required bath occupancy would be unphysical.
inline bool sweep_cell_params(const CascadedParams& base,
                              const DecoupledOccupancies& targets,
                              double delta, double m3, CascadedParams* cell,
                              std::string* reason) {
  *cell = base;
  cell->omega1 = 0.5 * delta;
  cell->omega2 = -0.5 * delta;
  cell->nbar3 = m3;
  const auto back_solve = [&](double kappa, double gamma, double target,
                              int mode, double* nbar) {
    if (kappa <= 0.0) {
      if (target == m3) {
        *nbar = 0.0;  // mode follows the channel; private bath is irrelevant
        return true;
      }
      *reason = "kappa" + std::to_string(mode) +
                " = 0 cannot hold the m" + std::to_string(mode) +
                " target away from m3";
      return false;
    }
    const double required = ((kappa + gamma) * target - gamma * m3) / kappa;
    if (required < 0.0) {
      *reason = "holding m" + std::to_string(mode) + " = " +
                std::to_string(target) + " at m3 = " + std::to_string(m3) +
                " needs nbar" + std::to_string(mode) + " = " +
                std::to_string(required) + " < 0";
      return false;
    }
    *nbar = required;
    return true;
  };
  return back_solve(cell->kappa1, cell->gamma1, targets.m1, 1, &cell->nbar1) &&
         back_solve(cell->kappa2, cell->gamma2, targets.m2, 2, &cell->nbar2);
}

}  // namespace detail

/// Evaluates routing_report over the full grid.  The template's own bath
/// occupancies define the decoupled-limit targets m1, m2 that every cell
/// holds fixed.  Cells are independent; `jobs` > 1 evaluates disjoint index
/// ranges concurrently and cannot change the stored order or values.
inline SweepGrid sweep_grid(const CascadedParams& base,
                            const std::vector<double>& delta_values,
                            const std::vector<double>& m3_values,
                            int jobs = 1) {
  validate(base);
  if (delta_values.empty() || m3_values.empty()) {
    throw std::invalid_argument("sweep axes must be non-empty");
  }
  for (double delta : delta_values) detail::require_finite(delta, "delta");
  for (double m3 : m3_values) detail::require_finite(m3, "m3");

  SweepGrid grid;
  grid.delta_values = delta_values;
  grid.m3_values = m3_values;
  grid.fixed = base;
  grid.cells.resize(delta_values.size() * m3_values.size());

  const DecoupledOccupancies targets = decoupled_limit(base);
  const auto evaluate = [&](std::size_t index) {
    SweepCell& cell = grid.cells[index];
    const double delta = delta_values[index / m3_values.size()];
    const double m3 = m3_values[index % m3_values.size()];
    try {
      CascadedParams params;
      if (!detail::sweep_cell_params(base, targets, delta, m3, &params,
                                     &cell.error)) {
        return;
      }
      cell.report = routing_report(params);
      cell.valid = true;
    } catch (const std::exception& failure) {
      cell.valid = false;
      cell.error = failure.what();
    }
  };

  const std::size_t total = grid.cells.size();
  const std::size_t worker_count = static_cast<std::size_t>(
      std::clamp(jobs, 1, 256));
  if (worker_count <= 1 || total <= 1) {
    for (std::size_t index = 0; index < total; ++index) evaluate(index);
    return grid;
  }

  std::vector<std::future<void>> workers;
  workers.reserve(worker_count);
  for (std::size_t worker = 0; worker < worker_count; ++worker) {
    const std::size_t begin = worker * total / worker_count;
    const std::size_t end = (worker + 1) * total / worker_count;
    workers.push_back(std::async(std::launch::async, [&evaluate, begin, end] {
      for (std::size_t index = begin; index < end; ++index) evaluate(index);
    }));
  }
  for (auto& worker : workers) worker.get();
  return grid;
}

}  // namespace thermoroute
