#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "thermoroute/analysis.hpp"
#include "thermoroute/model.hpp"
#include "thermoroute/version.hpp"

namespace thermoroute {

// ===========================================================================
// Number and string formatting
// ===========================================================================

/// Canonical serialization of a double: 12 significant digits, shortest '%g'
/// form, '.' decimal separator, ties resolved by the correctly rounded
/// binary-to-decimal conversion (round-half-even).  Identical inputs always
/// produce identical bytes, which is what makes whole-output determinism
/// testable.
inline std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return std::string(buffer);
}

namespace detail {

/// JSON has no NaN/Infinity literals; non-finite values serialize as null.
inline std::string json_number(double value) {
  return std::isfinite(value) ? format_number(value) : std::string("null");
}

inline std::string json_escape(const std::string& text) {
  std::string escaped;
  escaped.reserve(text.size() + 2);
  for (const char character : text) {
    switch (character) {
      case '"': escaped += "\\\""; break;
      case '\\': escaped += "\\\\"; break;
      case '\n': escaped += "\\n"; break;
      case '\r': escaped += "\\r"; break;
      case '\t': escaped += "\\t"; break;
      default:
        if (static_cast<unsigned char>(character) < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof buffer, "\\u%04x",
                        static_cast<unsigned>(character));
          escaped += buffer;
        } else {
          escaped += character;
        }
    }
  }
  return escaped;
}

}  // namespace detail

// ===========================================================================
// Key-value reports (steady / map output)
// ===========================================================================

/// One line of a scalar report.  `quoted` marks values that are text rather
/// than numbers (affects JSON only).
struct ReportField {
  std::string key;
  std::string value;
  bool quoted = false;
};

using Report = std::vector<ReportField>;

inline void append_number(Report* report, const std::string& key,
                          double value) {
  report->push_back({key, format_number(value), false});
}

inline void append_text(Report* report, const std::string& key,
                        const std::string& value) {
  report->push_back({key, value, true});
}

/// Two-column CSV: header "quantity,value" then one row per field.
inline std::string report_to_csv(const Report& report) {
  std::string out = "quantity,value\n";
  for (const ReportField& field : report) {
    out += field.key;
    out += ',';
    out += field.value;
    out += '\n';
  }
  return out;
}

/// Flat JSON object preserving field order.
inline std::string report_to_json(const Report& report) {
  std::string out = "{\n";
  for (std::size_t i = 0; i < report.size(); ++i) {
    const ReportField& field = report[i];
    out += "  \"" + detail::json_escape(field.key) + "\": ";
    if (field.quoted) {
      out += '"' + detail::json_escape(field.value) + '"';
    } else {
      // Numeric fields were formatted by format_number; JSON cannot carry
      // nan/inf, so those degrade to null.
      out += (field.value == "nan" || field.value == "inf" ||
              field.value == "-nan" || field.value == "-inf")
                 ? "null"
                 : field.value;
    }
    out += i + 1 < report.size() ? ",\n" : "\n";
  }
  out += "}\n";
  return out;
}

/// The template parameters in config-key naming, reused by reports and sweep
/// metadata so every emitted artifact names parameters the same way.
inline std::vector<std::pair<const char*, double>> cascaded_fields(
    const CascadedParams& params) {
  return {{"omega1", params.omega1},
          {"omega2", params.omega2},
          {"gamma1", params.gamma1},
          {"gamma2", params.gamma2},
          {"kappa1", params.kappa1},
          {"kappa2", params.kappa2},
          {"phi", params.phi},
          {"f_re", params.residual_coupling.real()},
          {"f_im", params.residual_coupling.imag()},
          {"nbar1", params.nbar1},
          {"nbar2", params.nbar2},
          {"nbar3", params.nbar3}};
}

// ===========================================================================
// Sweep serialization
// ===========================================================================

/// Grid as CSV, row-major (detuning outer, m3 inner), newline-terminated.
/// Invalid cells keep their axis values, carry nan in the occupancy columns,
/// and set valid to 0.
inline std::string sweep_to_csv(const SweepGrid& grid) {
  std::string out = "delta,m3,n1,n2,m1,m2,dn1,dn2,valid\n";
  const std::size_t m3_count = grid.m3_values.size();
  for (std::size_t index = 0; index < grid.cells.size(); ++index) {
    const SweepCell& cell = grid.cells[index];
    out += format_number(grid.delta_values[index / m3_count]);
    out += ',';
    out += format_number(grid.m3_values[index % m3_count]);
    const double nan = std::nan("");
    const RoutingReport& r = cell.report;
    for (const double value :
         {cell.valid ? r.n1 : nan, cell.valid ? r.n2 : nan,
          cell.valid ? r.m1 : nan, cell.valid ? r.m2 : nan,
          cell.valid ? r.dn1 : nan, cell.valid ? r.dn2 : nan}) {
      out += ',';
      out += format_number(value);
    }
    out += cell.valid ? ",1\n" : ",0\n";
  }
  return out;
}

/// Grid as JSON: a metadata object (tool version, template parameters, axis
/// values) followed by one record per cell mirroring the CSV fields.
inline std::string sweep_to_json(const SweepGrid& grid) {
  std::string out = "{\n  \"metadata\": {\n    \"version\": \"";
  out += kVersion;
  out += "\",\n    \"template\": {";
  const auto fields = cascaded_fields(grid.fixed);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    out += std::string(i == 0 ? "" : ", ") + "\"" + fields[i].first +
           "\": " + detail::json_number(fields[i].second);
  }
  out += "},\n";
  const auto append_axis = [&out](const char* name,
                                  const std::vector<double>& values,
                                  bool trailing_comma) {
    out += std::string("    \"") + name + "\": [";
    for (std::size_t i = 0; i < values.size(); ++i) {
      out += i == 0 ? "" : ", ";
      out += detail::json_number(values[i]);
    }
    out += trailing_comma ? "],\n" : "]\n";
  };
  append_axis("delta_values", grid.delta_values, true);
  append_axis("m3_values", grid.m3_values, false);
  out += "  },\n  \"cells\": [\n";

  const std::size_t m3_count = grid.m3_values.size();
  for (std::size_t index = 0; index < grid.cells.size(); ++index) {
    const SweepCell& cell = grid.cells[index];
    const RoutingReport& r = cell.report;
    out += "    {\"delta\": " +
           detail::json_number(grid.delta_values[index / m3_count]) +
           ", \"m3\": " + detail::json_number(grid.m3_values[index % m3_count]);
    const std::pair<const char*, double> numbers[] = {
        {"n1", r.n1}, {"n2", r.n2}, {"m1", r.m1},
        {"m2", r.m2}, {"dn1", r.dn1}, {"dn2", r.dn2}};
    for (const auto& [key, value] : numbers) {
      out += std::string(", \"") + key +
             "\": " + (cell.valid ? detail::json_number(value) : "null");
    }
    out += std::string(", \"valid\": ") + (cell.valid ? "true" : "false");
    out += ", \"error\": \"" + detail::json_escape(cell.error) + "\"}";
    out += index + 1 < grid.cells.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

}  // namespace thermoroute
