// End-to-end exercise of the command-line binary: exit codes, output
// determinism, sweep shape, format overrides, and the verify subcommand.
// Takes the binary path as its only argument.

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

int g_failures = 0;

void check(bool condition, const std::string& label,
           const std::string& detail) {
  std::printf("%s %s%s%s\n", condition ? "PASS" : "FAIL", label.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  if (!condition) ++g_failures;
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

/// Runs a shell command, capturing stdout; stderr is discarded so error
/// paths stay quiet in the test log.
RunResult run(const std::string& command) {
  RunResult result;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) {
    std::perror("popen");
    std::exit(2);
  }
  std::array<char, 4096> buffer;
  while (std::fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
    result.output += buffer.data();
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
  if (!out) {
    std::fprintf(stderr, "cannot write %s\n", path.c_str());
    std::exit(2);
  }
}

/// Parses a two-column "quantity,value" report into a key -> value map.
std::map<std::string, double> parse_report(const std::string& csv) {
  std::map<std::string, double> values;
  std::size_t line_start = 0;
  bool header = true;
  while (line_start < csv.size()) {
    std::size_t line_end = csv.find('\n', line_start);
    if (line_end == std::string::npos) line_end = csv.size();
    const std::string line = csv.substr(line_start, line_end - line_start);
    line_start = line_end + 1;
    if (header) {
      header = false;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) continue;
    values[line.substr(0, comma)] = std::strtod(line.c_str() + comma + 1,
                                                nullptr);
  }
  return values;
}

std::size_t count_lines(const std::string& text) {
  std::size_t lines = 0;
  for (const char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

const char* kPerfectSteady = R"(# perfect symmetric network
[cascaded]
omega1 = 0.0
omega2 = 0.0
gamma1 = 1.0
gamma2 = 1.0
kappa1 = 1.0
kappa2 = 1.0
phi = 0.0
f_re = 0.0
f_im = 0.0
nbar1 = 200.0
nbar2 = 200.0
nbar3 = 0.0
)";

const char* kSweepSection = R"(
[sweep]
delta_min = -10.0
delta_max = 10.0
delta_steps = 101
m3_min = 0.0
m3_max = 200.0
m3_steps = 101
)";

// kappa = 0 with F = -i gamma/2 closes a dark mode: the drift gains an
// exactly-zero eigenvalue, so no steady state exists.
const char* kDarkMode = R"([cascaded]
omega1 = 0.0
omega2 = 0.0
gamma1 = 1.0
gamma2 = 1.0
kappa1 = 0.0
kappa2 = 0.0
phi = 0.0
f_re = 0.0
f_im = -0.5
nbar1 = 1.0
nbar2 = 1.0
nbar3 = 1.0
)";

// kappa = 0 pins each decoupled target to the channel occupancy, so any
// sweep away from it asks for an impossible bath: every cell is invalid.
const char* kAllInvalid = R"([cascaded]
omega1 = 0.0
omega2 = 0.0
gamma1 = 1.0
gamma2 = 1.0
kappa1 = 0.0
kappa2 = 0.0
phi = 0.0
f_re = 0.0
f_im = 0.0
nbar1 = 1.0
nbar2 = 1.0
nbar3 = 0.0

[sweep]
delta_min = -1.0
delta_max = 1.0
delta_steps = 3
m3_min = 1.0
m3_max = 2.0
m3_steps = 3
)";

const char* kMatchedLinearized = R"([optomech-linearized]
delta1 = 50.0
delta2 = 50.0
kappa1 = 1.0
kappa2 = 1.0
omega_m = 50.0
gamma_m = 1000.0
j = 0.5
g1 = 15.811388300841896
g2 = 15.811388300841896
phi = 1.5707963267948966
nbar1 = 200.0
nbar2 = 100.0
nbar_m = 0.0
)";

const char* kDrivenFull = R"([optomech-full]
delta1 = 100.0
delta2 = 100.0
kappa1 = 1.0
kappa2 = 1.0
omega_m = 100.0
gamma_m = 40.0
j = 0.0
g1 = 1.0e-4
g2 = 1.0e-4
e1_re = 1.0e5
e1_im = 0.0
e2_re = 0.0
e2_im = 1.0e5
nbar1 = 150.0
nbar2 = 20.0
nbar_m = 5.0
)";

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: cli_integration <binary>\n");
    return 2;
  }
  const std::string binary = std::string("\"") + argv[1] + "\"";

  char dir_template[] = "/tmp/thermoroute-cli-XXXXXX";
  if (mkdtemp(dir_template) == nullptr) {
    std::perror("mkdtemp");
    return 2;
  }
  const std::string dir = dir_template;

  const std::string steady_cfg = dir + "/steady.cfg";
  write_file(steady_cfg, kPerfectSteady);
  const std::string sweep_cfg = dir + "/sweep.cfg";
  write_file(sweep_cfg, std::string(kPerfectSteady) + kSweepSection);
  const std::string dark_cfg = dir + "/dark.cfg";
  write_file(dark_cfg, kDarkMode);
  const std::string invalid_cfg = dir + "/invalid.cfg";
  write_file(invalid_cfg, kAllInvalid);
  const std::string linear_cfg = dir + "/linear.cfg";
  write_file(linear_cfg, kMatchedLinearized);
  const std::string full_cfg = dir + "/full.cfg";
  write_file(full_cfg, kDrivenFull);
  const std::string broken_cfg = dir + "/broken.cfg";
  write_file(broken_cfg, std::string(kPerfectSteady) + "bogus_key = 1\n");

  // --- steady: routing values and determinism -----------------------------
  const RunResult steady = run(binary + " steady --config " + steady_cfg);
  check(steady.exit_code == 0, "steady exit code",
        "got " + std::to_string(steady.exit_code));
  const auto report = parse_report(steady.output);
  check(steady.output.rfind("quantity,value\n", 0) == 0, "steady CSV header",
        "");
  const double steady_dn2 = report.count("dn2") == 1 ? report.at("dn2") : NAN;
  check(std::abs(steady_dn2 - 50.0) <= 1e-9, "steady dn2 = 50",
        "got " + std::to_string(steady_dn2));
  check(report.count("dn1") == 1 && std::abs(report.at("dn1")) <= 1e-9,
        "steady dn1 = 0", "");
  check(report.count("stable") == 1 && report.at("stable") == 1.0,
        "steady reports stability", "");

  const RunResult steady_again = run(binary + " steady --config " + steady_cfg);
  check(steady_again.output == steady.output && !steady.output.empty(),
        "steady output deterministic", "");

  // --- sweep: shape, determinism across worker counts, spot value ---------
  const RunResult sweep1 =
      run(binary + " sweep --config " + sweep_cfg + " --jobs 1");
  const RunResult sweep4 =
      run(binary + " sweep --config " + sweep_cfg + " --jobs 4");
  check(sweep1.exit_code == 0 && sweep4.exit_code == 0, "sweep exit codes",
        "");
  check(sweep1.output == sweep4.output, "sweep --jobs 1 == --jobs 4", "");
  check(count_lines(sweep1.output) == 101 * 101 + 1, "sweep row count",
        "got " + std::to_string(count_lines(sweep1.output)));
  check(sweep1.output.rfind("delta,m3,n1,n2,m1,m2,dn1,dn2,valid\n", 0) == 0,
        "sweep CSV header", "");
  check(sweep1.output.find(",0\n") == std::string::npos,
        "sweep has no invalid cells", "");
  const std::size_t center = sweep1.output.find("\n0,0,");
  check(center != std::string::npos, "sweep contains the (0, 0) cell", "");
  if (center != std::string::npos) {
    // columns: delta, m3, n1, n2, m1, m2, dn1, dn2, valid
    const char* cursor = sweep1.output.c_str() + center + 1;
    double columns[8] = {0};
    for (double& column : columns) {
      column = std::strtod(cursor, const_cast<char**>(&cursor));
      ++cursor;  // skip the separator
    }
    check(std::abs(columns[7] - 50.0) <= 1e-9, "sweep dn2 at (0, 0) = 50",
          "got " + std::to_string(columns[7]));
  }

  const RunResult sweep_json =
      run(binary + " sweep --config " + sweep_cfg + " --output json");
  check(sweep_json.exit_code == 0 && sweep_json.output.rfind("{", 0) == 0 &&
            sweep_json.output.find("\"cells\"") != std::string::npos &&
            sweep_json.output.find("\"valid\": true") != std::string::npos,
        "sweep --output json", "");

  // --- map: interference-matched coupling cancels exactly ------------------
  const RunResult map_run = run(binary + " map --config " + linear_cfg);
  check(map_run.exit_code == 0, "map exit code",
        "got " + std::to_string(map_run.exit_code));
  const auto mapped = parse_report(map_run.output);
  check(mapped.count("f_abs") == 1 && mapped.at("f_abs") <= 1e-12,
        "map |F| = 0 for matched interference", "");
  check(mapped.count("gamma1") == 1 &&
            std::abs(mapped.at("gamma1") - 1.0) <= 1e-12,
        "map gamma1 = 4 G^2 / gamma_m = 1", "");
  check(mapped.count("adiabatic_validity_ratio") == 1 &&
            mapped.at("adiabatic_validity_ratio") <= 0.1,
        "map validity ratio small in the broadband limit", "");

  const RunResult map_eval =
      run(binary + " map --config " + linear_cfg + " --omega-eval 51");
  const auto mapped_eval = parse_report(map_eval.output);
  check(map_eval.exit_code == 0 && mapped_eval.count("omega_eval") == 1 &&
            mapped_eval.at("omega_eval") == 51.0,
        "map --omega-eval override", "");

  // --- steady on a driven optomech config ----------------------------------
  const RunResult full = run(binary + " steady --config " + full_cfg);
  const auto full_report = parse_report(full.output);
  check(full.exit_code == 0 && full_report.count("three_mode_n1") == 1 &&
            full_report.count("adiabatic_validity_ratio") == 1 &&
            std::isfinite(full_report.at("three_mode_n1")),
        "steady on driven optomech config", "");

  // --- error paths ----------------------------------------------------------
  const RunResult dark = run(binary + " steady --config " + dark_cfg);
  check(dark.exit_code == 2, "dark-mode config exits 2",
        "got " + std::to_string(dark.exit_code));
  const RunResult invalid = run(binary + " sweep --config " + invalid_cfg);
  check(invalid.exit_code == 2, "all-invalid sweep exits 2",
        "got " + std::to_string(invalid.exit_code));
  const RunResult broken = run(binary + " steady --config " + broken_cfg);
  check(broken.exit_code == 3 && broken.output.empty(),
        "unknown config key exits 3",
        "got " + std::to_string(broken.exit_code));
  const RunResult missing = run(binary + " steady --config " + dir + "/nope");
  check(missing.exit_code == 3, "missing config file exits 3",
        "got " + std::to_string(missing.exit_code));
  const RunResult no_sub = run(binary);
  check(no_sub.exit_code == 3, "missing subcommand exits 3",
        "got " + std::to_string(no_sub.exit_code));
  const RunResult bad_flag =
      run(binary + " steady --config " + steady_cfg + " --omega-eval abc");
  check(bad_flag.exit_code == 3, "non-numeric flag exits 3",
        "got " + std::to_string(bad_flag.exit_code));
  const RunResult help = run(binary + " --help");
  check(help.exit_code == 0 && !help.output.empty(), "--help exits 0", "");

  // --- verify subcommand -----------------------------------------------------
  const RunResult verify = run(binary + " verify");
  check(verify.exit_code == 0, "verify exit code",
        "got " + std::to_string(verify.exit_code));
  check(verify.output.find("PASS closed-form-grid") != std::string::npos &&
            verify.output.find("FAIL") == std::string::npos,
        "verify reports every check as PASS", "");

  std::printf("%s: %d failure(s)\n", g_failures == 0 ? "OK" : "FAILED",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
