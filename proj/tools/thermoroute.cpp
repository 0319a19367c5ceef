// Command-line front end: steady-state reports, parameter sweeps, the
// optomechanical mapping, and the built-in verification suite.

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>

#include "CLI11.hpp"
#include "thermoroute/thermoroute.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string output;  ///< "", "csv" or "json"; empty defers to the config
  int jobs = 1;
  double omega_eval = 0.0;
  bool has_omega_eval = false;
};

thermoroute::RunConfig load_config(const std::string& path) {
  std::ifstream input(path);
  if (!input) {
    throw thermoroute::ConfigError(0,
                                   "cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return thermoroute::parse_config(buffer.str());
}

thermoroute::OutputFormat select_format(const thermoroute::RunConfig& config,
                                        const Options& options) {
  if (options.output == "csv") return thermoroute::OutputFormat::csv;
  if (options.output == "json") return thermoroute::OutputFormat::json;
  return config.output;
}

/// Evaluation frequency precedence: command-line flag, then config key,
/// then the documented default omega_m.
double select_omega_eval(const thermoroute::RunConfig& config,
                         const Options& options, double omega_m) {
  if (options.has_omega_eval) return options.omega_eval;
  if (config.has_omega_eval) return config.omega_eval;
  return omega_m;
}

void append_routing(thermoroute::Report* report,
                    const thermoroute::RoutingReport& routing) {
  thermoroute::append_number(report, "n1", routing.n1);
  thermoroute::append_number(report, "n2", routing.n2);
  thermoroute::append_number(report, "m1", routing.m1);
  thermoroute::append_number(report, "m2", routing.m2);
  thermoroute::append_number(report, "m3", routing.m3);
  thermoroute::append_number(report, "dn1", routing.dn1);
  thermoroute::append_number(report, "dn2", routing.dn2);
}

void append_stability(thermoroute::Report* report,
                      const thermoroute::StabilityReport& stability) {
  for (Eigen::Index k = 0; k < stability.eigenvalues.size(); ++k) {
    const std::string label = "eig" + std::to_string(k + 1);
    thermoroute::append_number(report, label + "_re",
                               stability.eigenvalues[k].real());
    thermoroute::append_number(report, label + "_im",
                               stability.eigenvalues[k].imag());
  }
  thermoroute::append_number(report, "max_real_part",
                             stability.max_real_part);
  thermoroute::append_number(report, "stable", stability.stable ? 1.0 : 0.0);
}

void append_mapped_params(thermoroute::Report* report,
                          const thermoroute::CascadedParams& mapped) {
  for (const auto& [key, value] : thermoroute::cascaded_fields(mapped)) {
    thermoroute::append_number(report, key, value);
  }
  thermoroute::append_number(report, "f_abs",
                             std::abs(mapped.residual_coupling));
}

void emit_report(const thermoroute::Report& report,
                 thermoroute::OutputFormat format) {
  if (format == thermoroute::OutputFormat::csv) {
    std::cout << thermoroute::report_to_csv(report);
  } else {
    std::cout << thermoroute::report_to_json(report);
  }
}

int run_steady(const Options& options) {
  const thermoroute::RunConfig config = load_config(options.config_path);
  thermoroute::Report report;

  if (config.is_cascaded()) {
    const auto& params = std::get<thermoroute::CascadedParams>(config.system);
    append_routing(&report, thermoroute::routing_report(params));
    append_stability(&report, thermoroute::stability_check(
                                  thermoroute::build_cascaded_drift(params)));
  } else {
    const auto& params = std::get<thermoroute::OptomechParams>(config.system);
    const thermoroute::LinearizedOptomech linear = thermoroute::linearize(params);
    const thermoroute::CascadedParams mapped =
        thermoroute::map_to_cascaded(linear);

    append_routing(&report, thermoroute::routing_report(mapped));

    const thermoroute::OccupancyMatrix three =
        thermoroute::lyapunov_steady_state(
            thermoroute::build_three_mode_rwa_drift(linear));
    thermoroute::append_number(&report, "three_mode_n1", three.occupancy(0));
    thermoroute::append_number(&report, "three_mode_n2", three.occupancy(1));
    thermoroute::append_number(&report, "three_mode_nm", three.occupancy(2));

    const double omega_eval =
        select_omega_eval(config, options, linear.omega_m);
    thermoroute::append_number(&report, "omega_eval", omega_eval);
    thermoroute::append_number(
        &report, "adiabatic_validity_ratio",
        thermoroute::adiabatic_validity_ratio(linear, omega_eval));

    append_stability(&report, thermoroute::stability_check(
                                  thermoroute::build_cascaded_drift(mapped)));
  }

  emit_report(report, select_format(config, options));
  return 0;
}

int run_map(const Options& options) {
  const thermoroute::RunConfig config = load_config(options.config_path);
  if (config.is_cascaded()) {
    throw thermoroute::ConfigError(
        0, "'map' needs an [optomech-linearized] or [optomech-full] section");
  }
  const auto& params = std::get<thermoroute::OptomechParams>(config.system);
  const thermoroute::LinearizedOptomech linear = thermoroute::linearize(params);
  const thermoroute::CascadedParams mapped =
      thermoroute::map_to_cascaded(linear);

  thermoroute::Report report;
  append_mapped_params(&report, mapped);

  const double omega_eval = select_omega_eval(config, options, linear.omega_m);
  thermoroute::append_number(&report, "omega_eval", omega_eval);
  thermoroute::append_number(
      &report, "adiabatic_validity_ratio",
      thermoroute::adiabatic_validity_ratio(linear, omega_eval));

  if (std::holds_alternative<thermoroute::DrivenCoupling>(params.coupling)) {
    const thermoroute::ClassicalSteadyState point =
        thermoroute::classical_steady_state(params);
    thermoroute::append_number(&report, "alpha1_re", point.alpha1.real());
    thermoroute::append_number(&report, "alpha1_im", point.alpha1.imag());
    thermoroute::append_number(&report, "alpha2_re", point.alpha2.real());
    thermoroute::append_number(&report, "alpha2_im", point.alpha2.imag());
    thermoroute::append_number(&report, "beta_re", point.beta.real());
    thermoroute::append_number(&report, "beta_im", point.beta.imag());
    thermoroute::append_number(&report, "classical_residual", point.residual);
    thermoroute::append_number(&report, "classical_iterations",
                               static_cast<double>(point.iterations));
  }

  emit_report(report, select_format(config, options));
  return 0;
}

int run_sweep(const Options& options) {
  const thermoroute::RunConfig config = load_config(options.config_path);
  if (!config.has_sweep) {
    throw thermoroute::ConfigError(0, "'sweep' needs a [sweep] section");
  }
  const thermoroute::CascadedParams base =
      config.is_cascaded()
          ? std::get<thermoroute::CascadedParams>(config.system)
          : thermoroute::map_to_cascaded(thermoroute::linearize(
                std::get<thermoroute::OptomechParams>(config.system)));

  const thermoroute::SweepGrid grid =
      thermoroute::sweep_grid(base, config.delta_range.axis(),
                              config.m3_range.axis(), options.jobs);

  std::size_t valid = 0;
  for (const thermoroute::SweepCell& cell : grid.cells) {
    if (cell.valid) ++valid;
  }
  if (valid == 0) {
    const std::string reason =
        grid.cells.empty() ? "empty grid" : grid.cells.front().error;
    std::cerr << "error: every sweep cell is invalid (" << reason << ")\n";
    return 2;
  }

  if (select_format(config, options) == thermoroute::OutputFormat::csv) {
    std::cout << thermoroute::sweep_to_csv(grid);
  } else {
    std::cout << thermoroute::sweep_to_json(grid);
  }
  return 0;
}

int run_verify() {
  const std::vector<thermoroute::CheckResult> results =
      thermoroute::run_acceptance_checks();
  std::size_t passed = 0;
  for (const thermoroute::CheckResult& result : results) {
    if (result.passed) ++passed;
    std::printf("%s %-36s (%6.2f s) %s\n", result.passed ? "PASS" : "FAIL",
                result.name.c_str(), result.seconds, result.detail.c_str());
  }
  std::printf("%zu/%zu checks passed\n", passed, results.size());
  return passed == results.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state thermal occupancies and non-reciprocal "
               "noise routing for cascaded two-mode networks"};
  app.set_version_flag("--version", thermoroute::kVersion);
  app.require_subcommand(1);

  Options options;

  const auto add_common = [&](CLI::App* cmd, bool with_jobs,
                              bool with_omega_eval) {
    cmd->add_option("-c,--config", options.config_path, "Config file path")
        ->required();
    cmd->add_option("-o,--output", options.output,
                    "Output format (overrides the config)")
        ->check(CLI::IsMember({"csv", "json"}));
    if (with_jobs) {
      cmd->add_option("-j,--jobs", options.jobs, "Worker threads")
          ->check(CLI::Range(1, 256));
    }
    if (with_omega_eval) {
      cmd->add_option("--omega-eval", options.omega_eval,
                      "Frequency for the adiabatic validity ratio "
                      "(default: omega_m)")
          ->check(CLI::Number);
    }
  };

  CLI::App* steady =
      app.add_subcommand("steady", "Steady-state occupancies and routing "
                                   "report for the configured system");
  add_common(steady, false, true);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Grid sweep over detuning and channel occupancy");
  add_common(sweep, true, false);

  CLI::App* map_cmd = app.add_subcommand(
      "map", "Mapped cascaded parameters for an optomech config");
  add_common(map_cmd, false, true);

  CLI::App* verify = app.add_subcommand(
      "verify", "Run the built-in acceptance checks and report pass/fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 3;  // usage problems are config errors
  }

  if (steady->count("--omega-eval") != 0 || map_cmd->count("--omega-eval") != 0) {
    options.has_omega_eval = true;
  }

  try {
    if (steady->parsed()) return run_steady(options);
    if (sweep->parsed()) return run_sweep(options);
    if (map_cmd->parsed()) return run_map(options);
    if (verify->parsed()) return run_verify();
  } catch (const thermoroute::ConfigError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 3;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }
  return 0;
}
