#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "thermoroute/model.hpp"

namespace thermoroute {

// ===========================================================================
// Run configuration
// ===========================================================================

enum class OutputFormat { csv, json };

/// Inclusive linear axis specification for a sweep.
struct SweepRange {
  double min = 0.0;
  double max = 0.0;
  int steps = 0;

  std::vector<double> axis() const {
    std::vector<double> values(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
      values[static_cast<std::size_t>(i)] =
          min + (max - min) * static_cast<double>(i) /
                    static_cast<double>(steps - 1);
    }
    return values;
  }
};

/// Everything one invocation needs: the system parameters, the optional
/// sweep axes, the output format, and the optional evaluation frequency
/// (meaningful for optomech systems; defaults to omega_m downstream).
struct RunConfig {
  std::variant<CascadedParams, OptomechParams> system{CascadedParams{}};
  bool has_sweep = false;
  SweepRange delta_range{};
  SweepRange m3_range{};
  OutputFormat output = OutputFormat::csv;
  bool has_omega_eval = false;
  double omega_eval = 0.0;

  bool is_cascaded() const {
    return std::holds_alternative<CascadedParams>(system);
  }
};

/// Parse or validation failure, carrying the 1-based config line when the
/// problem is tied to one (0 for document-level problems).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "config line " + std::to_string(line) +
                                          ": " + message
                                    : "config: " + message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_ = 0;
};

// ===========================================================================
// Parser
// ===========================================================================

namespace detail {

struct RawEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct RawSection {
  int line = 0;
  std::map<std::string, RawEntry> entries;
};

inline std::string strip(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

/// Tokenizes the document into sections of key/value strings.  Only shape
/// errors are raised here; meaning is checked by the typed readers below.
inline std::map<std::string, RawSection> scan_sections(
    const std::string& text) {
  static const char* const known_sections[] = {
      "cascaded", "optomech-linearized", "optomech-full", "sweep", "run"};

  std::map<std::string, RawSection> sections;
  RawSection* current = nullptr;
  std::string current_name;

  int line_number = 0;
  std::size_t position = 0;
  while (position <= text.size()) {
    const std::size_t next = text.find('\n', position);
    const std::string raw =
        next == std::string::npos ? text.substr(position)
                                  : text.substr(position, next - position);
    position = next == std::string::npos ? text.size() + 1 : next + 1;
    ++line_number;

    const std::string line = strip(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(line_number, "unterminated section header '" +
                                           line + "'");
      }
      const std::string name = strip(line.substr(1, line.size() - 2));
      bool known = false;
      for (const char* candidate : known_sections) {
        if (name == candidate) known = true;
      }
      if (!known) {
        throw ConfigError(line_number, "unknown section [" + name + "]");
      }
      if (sections.count(name) != 0) {
        throw ConfigError(line_number, "duplicate section [" + name + "]");
      }
      current = &sections[name];
      current->line = line_number;
      current_name = name;
      continue;
    }

    const std::size_t equals = line.find('=');
    if (equals == std::string::npos) {
      throw ConfigError(line_number,
                        "expected 'key = value', got '" + line + "'");
    }
    if (current == nullptr) {
      throw ConfigError(line_number, "key outside any section");
    }
    const std::string key = strip(line.substr(0, equals));
    const std::string value = strip(line.substr(equals + 1));
    if (key.empty()) {
      throw ConfigError(line_number, "empty key before '='");
    }
    if (value.empty()) {
      throw ConfigError(line_number, "empty value for key '" + key + "'");
    }
    if (current->entries.count(key) != 0) {
      throw ConfigError(line_number, "duplicate key '" + key +
                                         "' in section [" + current_name +
                                         "]");
    }
    current->entries[key] = RawEntry{value, line_number, false};
  }
  return sections;
}

inline RawEntry& take_entry(RawSection& section, const std::string& section_name,
                            const std::string& key) {
  auto found = section.entries.find(key);
  if (found == section.entries.end()) {
    throw ConfigError(section.line, "missing required key '" + key +
                                        "' in section [" + section_name + "]");
  }
  found->second.used = true;
  return found->second;
}

inline double read_number(RawSection& section, const std::string& section_name,
                          const std::string& key) {
  const RawEntry& entry = take_entry(section, section_name, key);
  double value = 0.0;
  const char* begin = entry.value.data();
  const char* end = begin + entry.value.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end) {
    throw ConfigError(entry.line, "value for '" + key +
                                      "' is not a number: '" + entry.value +
                                      "'");
  }
  return value;
}

inline int read_steps(RawSection& section, const std::string& section_name,
                      const std::string& key) {
  const RawEntry& entry = take_entry(section, section_name, key);
  int value = 0;
  const char* begin = entry.value.data();
  const char* end = begin + entry.value.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end) {
    throw ConfigError(entry.line, "value for '" + key +
                                      "' is not an integer: '" + entry.value +
                                      "'");
  }
  if (value < 2) {
    throw ConfigError(entry.line,
                      "'" + key + "' must be >= 2, got " + entry.value);
  }
  return value;
}

inline void reject_unused(const std::map<std::string, RawSection>& sections) {
  for (const auto& [name, section] : sections) {
    for (const auto& [key, entry] : section.entries) {
      if (!entry.used) {
        throw ConfigError(entry.line,
                          "unknown key '" + key + "' in section [" + name +
                              "]");
      }
    }
  }
}

}  // namespace detail

/// Parses the sectioned key-value config format.  Strict: every key must be
/// known, every required key present, every number well-formed, and exactly
/// one system section given; the resulting parameters are validated before
/// return.  All failures carry the offending line.
inline RunConfig parse_config(const std::string& text) {
  auto sections = detail::scan_sections(text);

  int system_count = 0;
  for (const char* name : {"cascaded", "optomech-linearized", "optomech-full"}) {
    system_count += sections.count(name) != 0 ? 1 : 0;
  }
  if (system_count != 1) {
    throw ConfigError(
        0, "expected exactly one system section ([cascaded], "
           "[optomech-linearized], or [optomech-full]), found " +
               std::to_string(system_count));
  }

  RunConfig config;

  if (sections.count("cascaded") != 0) {
    detail::RawSection& section = sections["cascaded"];
    const std::string name = "cascaded";
    CascadedParams params;
    params.omega1 = detail::read_number(section, name, "omega1");
    params.omega2 = detail::read_number(section, name, "omega2");
    params.gamma1 = detail::read_number(section, name, "gamma1");
    params.gamma2 = detail::read_number(section, name, "gamma2");
    params.kappa1 = detail::read_number(section, name, "kappa1");
    params.kappa2 = detail::read_number(section, name, "kappa2");
    params.phi = detail::read_number(section, name, "phi");
    params.residual_coupling = {detail::read_number(section, name, "f_re"),
                                detail::read_number(section, name, "f_im")};
    params.nbar1 = detail::read_number(section, name, "nbar1");
    params.nbar2 = detail::read_number(section, name, "nbar2");
    params.nbar3 = detail::read_number(section, name, "nbar3");
    try {
      validate(params);
    } catch (const std::invalid_argument& failure) {
      throw ConfigError(section.line, std::string("[cascaded] invalid: ") +
                                          failure.what());
    }
    config.system = params;
  } else {
    const bool linearized = sections.count("optomech-linearized") != 0;
    const std::string name =
        linearized ? "optomech-linearized" : "optomech-full";
    detail::RawSection& section = sections[name];
    OptomechParams params;
    params.delta1 = detail::read_number(section, name, "delta1");
    params.delta2 = detail::read_number(section, name, "delta2");
    params.kappa1 = detail::read_number(section, name, "kappa1");
    params.kappa2 = detail::read_number(section, name, "kappa2");
    params.omega_m = detail::read_number(section, name, "omega_m");
    params.gamma_m = detail::read_number(section, name, "gamma_m");
    params.hopping = detail::read_number(section, name, "j");
    if (linearized) {
      EffectiveCoupling coupling;
      coupling.coupling1 = detail::read_number(section, name, "g1");
      coupling.coupling2 = detail::read_number(section, name, "g2");
      coupling.phi = detail::read_number(section, name, "phi");
      params.coupling = coupling;
    } else {
      DrivenCoupling coupling;
      coupling.g1 = detail::read_number(section, name, "g1");
      coupling.g2 = detail::read_number(section, name, "g2");
      coupling.drive1 = {detail::read_number(section, name, "e1_re"),
                         detail::read_number(section, name, "e1_im")};
      coupling.drive2 = {detail::read_number(section, name, "e2_re"),
                         detail::read_number(section, name, "e2_im")};
      params.coupling = coupling;
    }
    params.nbar1 = detail::read_number(section, name, "nbar1");
    params.nbar2 = detail::read_number(section, name, "nbar2");
    params.nbar_m = detail::read_number(section, name, "nbar_m");
    try {
      validate(params);
    } catch (const std::invalid_argument& failure) {
      throw ConfigError(section.line,
                        "[" + name + "] invalid: " + failure.what());
    }
    config.system = params;
  }

  if (sections.count("sweep") != 0) {
    detail::RawSection& section = sections["sweep"];
    const std::string name = "sweep";
    config.has_sweep = true;
    config.delta_range.min = detail::read_number(section, name, "delta_min");
    config.delta_range.max = detail::read_number(section, name, "delta_max");
    config.delta_range.steps = detail::read_steps(section, name, "delta_steps");
    config.m3_range.min = detail::read_number(section, name, "m3_min");
    config.m3_range.max = detail::read_number(section, name, "m3_max");
    config.m3_range.steps = detail::read_steps(section, name, "m3_steps");
    if (!(config.delta_range.min < config.delta_range.max)) {
      throw ConfigError(section.line, "delta_min must be < delta_max");
    }
    if (!(config.m3_range.min < config.m3_range.max)) {
      throw ConfigError(section.line, "m3_min must be < m3_max");
    }
  }

  if (sections.count("run") != 0) {
    detail::RawSection& section = sections["run"];
    auto output = section.entries.find("output");
    if (output != section.entries.end()) {
      output->second.used = true;
      if (output->second.value == "csv") {
        config.output = OutputFormat::csv;
      } else if (output->second.value == "json") {
        config.output = OutputFormat::json;
      } else {
        throw ConfigError(output->second.line,
                          "output must be 'csv' or 'json', got '" +
                              output->second.value + "'");
      }
    }
    auto omega_eval = section.entries.find("omega_eval");
    if (omega_eval != section.entries.end()) {
      config.omega_eval = detail::read_number(section, "run", "omega_eval");
      if (!std::isfinite(config.omega_eval)) {
        throw ConfigError(omega_eval->second.line, "omega_eval must be finite");
      }
      config.has_omega_eval = true;
    }
  }

  detail::reject_unused(sections);
  return config;
}

}  // namespace thermoroute
