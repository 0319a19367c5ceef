#include <cmath>
#include <limits>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "thermoroute/io.hpp"
#include "thermoroute/version.hpp"

using namespace thermoroute;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::EndsWith;
using Catch::Matchers::StartsWith;

TEST_CASE("numbers serialize to their shortest 12-digit form") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(50.0) == "50");
  CHECK(format_number(-0.5) == "-0.5");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(123456.789) == "123456.789");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(1e-9) == "1e-09");
  CHECK(format_number(1.5e21) == "1.5e+21");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("identical values always serialize to identical bytes") {
  const double value = std::acos(-0.123);
  CHECK(format_number(value) == format_number(value));
  CHECK(format_number(0.1 + 0.2) == format_number(0.1 + 0.2));
}

TEST_CASE("scalar reports render as two-column CSV") {
  Report report;
  append_number(&report, "n1", 100.0);
  append_number(&report, "dn2", -2.5);
  append_text(&report, "note", "hello");
  CHECK(report_to_csv(report) ==
        "quantity,value\n"
        "n1,100\n"
        "dn2,-2.5\n"
        "note,hello\n");
}

TEST_CASE("scalar reports render as a flat JSON object") {
  Report report;
  append_number(&report, "n1", 100.0);
  append_number(&report, "bad", std::numeric_limits<double>::quiet_NaN());
  append_text(&report, "msg", "say \"hi\"\nnow");
  CHECK(report_to_json(report) ==
        "{\n"
        "  \"n1\": 100,\n"
        "  \"bad\": null,\n"
        "  \"msg\": \"say \\\"hi\\\"\\nnow\"\n"
        "}\n");
}

TEST_CASE("JSON escaping covers quotes, backslashes and control bytes") {
  CHECK(detail::json_escape("plain") == "plain");
  CHECK(detail::json_escape("a\\b") == "a\\\\b");
  CHECK(detail::json_escape("tab\there") == "tab\\there");
  CHECK(detail::json_escape(std::string("\x01")) == "\\u0001");
  CHECK(detail::json_escape("\r\n") == "\\r\\n");
}

namespace {

/// A tiny hand-built grid: one valid cell and one failed cell.
SweepGrid two_cell_grid() {
  SweepGrid grid;
  grid.delta_values = {-1.0, 2.0};
  grid.m3_values = {3.0};
  grid.fixed = CascadedParams{};
  grid.cells.resize(2);
  grid.cells[0].valid = true;
  grid.cells[0].report = RoutingReport{1.5, 2.0, 0.25, 4.0, 3.0, 1.25, -2.0};
  grid.cells[1].valid = false;
  grid.cells[1].error = "boom \"quoted\"";
  return grid;
}

}  // namespace

TEST_CASE("sweep CSV is row-major with nan placeholders for failed cells") {
  CHECK(sweep_to_csv(two_cell_grid()) ==
        "delta,m3,n1,n2,m1,m2,dn1,dn2,valid\n"
        "-1,3,1.5,2,0.25,4,1.25,-2,1\n"
        "2,3,nan,nan,nan,nan,nan,nan,0\n");
}

TEST_CASE("sweep JSON carries metadata, null placeholders and escaped errors") {
  const std::string json = sweep_to_json(two_cell_grid());

  SECTION("metadata block") {
    REQUIRE_THAT(json, StartsWith("{\n  \"metadata\": {\n    \"version\": \""));
    CHECK_THAT(json, ContainsSubstring(std::string("\"version\": \"") +
                                       kVersion + "\""));
    CHECK_THAT(json, ContainsSubstring("\"template\": {\"omega1\": 0, "));
    CHECK_THAT(json, ContainsSubstring("\"delta_values\": [-1, 2]"));
    CHECK_THAT(json, ContainsSubstring("\"m3_values\": [3]"));
  }
  SECTION("cell records") {
    CHECK_THAT(json, ContainsSubstring(
                         "{\"delta\": -1, \"m3\": 3, \"n1\": 1.5, \"n2\": 2, "
                         "\"m1\": 0.25, \"m2\": 4, \"dn1\": 1.25, "
                         "\"dn2\": -2, \"valid\": true, \"error\": \"\"},"));
    CHECK_THAT(json, ContainsSubstring(
                         "{\"delta\": 2, \"m3\": 3, \"n1\": null, "
                         "\"n2\": null, \"m1\": null, \"m2\": null, "
                         "\"dn1\": null, \"dn2\": null, \"valid\": false, "
                         "\"error\": \"boom \\\"quoted\\\"\"}"));
    CHECK_THAT(json, EndsWith("  ]\n}\n"));
  }
  SECTION("braces and brackets stay balanced") {
    long braces = 0;
    long brackets = 0;
    bool in_string = false;
    for (std::size_t i = 0; i < json.size(); ++i) {
      const char c = json[i];
      if (in_string) {
        if (c == '\\') ++i;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      if (c == '{') ++braces;
      if (c == '}') --braces;
      if (c == '[') ++brackets;
      if (c == ']') --brackets;
    }
    CHECK(braces == 0);
    CHECK(brackets == 0);
    CHECK_FALSE(in_string);
  }
}

TEST_CASE("template serialization names every parameter in config keys") {
  CascadedParams params;
  params.omega1 = 0.5;
  params.residual_coupling = {0.125, -0.5};
  const auto fields = cascaded_fields(params);
  REQUIRE(fields.size() == 12);
  CHECK(fields[0].first == std::string("omega1"));
  CHECK(fields[0].second == 0.5);
  CHECK(fields[7].first == std::string("f_re"));
  CHECK(fields[7].second == 0.125);
  CHECK(fields[8].first == std::string("f_im"));
  CHECK(fields[8].second == -0.5);
  CHECK(fields[11].first == std::string("nbar3"));
}
