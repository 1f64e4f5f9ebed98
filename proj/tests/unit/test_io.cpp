#include <doctest.h>

#include <json.hpp>

#include "fixtures.hpp"
#include "macexp/io.hpp"

using namespace macexp;

namespace {

const char* kExampleConfig = R"({
  "source": [[0.0005, 0.0095], [0.0005, 0.9895]],
  "channel": {"example": {"k1": 0.045, "k2": 0.01}},
  "bank": [
    [[0, 0, 0, 0, 0.5, 0.5], [0.25, 0.25, 0.25, 0.25, 0, 0]],
    [[0, 0, 0, 0, 0.5, 0.5], [0.25, 0.25, 0.25, 0.25, 0, 0]]
  ],
  "solver": {"tol_gamma": 1e-5, "jobs": 3}
})";

ErrorCode code_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parse_config accepted the document");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("example channel config") {
  const auto c = parse_config(kExampleConfig);
  const auto ref = fixtures::example_instance();
  CHECK(c.instance.channel.to_tensor() == ref.channel.to_tensor());
  CHECK(c.instance.source.to_matrix() == ref.source.to_matrix());
  CHECK(c.instance.bank.data() == ref.bank.data());
  CHECK(c.solver.tol_gamma == 1e-5);
  CHECK(c.solver.jobs == 3);
  CHECK(c.solver.rho_grid == SolverOptions{}.rho_grid);
}

TEST_CASE("explicit channel config") {
  const auto c = parse_config(R"({"source": [[0.5, 0.5]],
    "channel": [[[1, 0], [0, 1]]],
    "bank": [[[1], [1]], [[0.5, 0.5], [1, 0]]]})");
  CHECK(c.instance.channel.size_x1() == 1);
  CHECK(c.instance.channel.size_x2() == 2);
  CHECK(c.instance.channel(0, 1, 1) == 1.0);
}

TEST_CASE("config errors") {
  CHECK(code_of("{") == ErrorCode::ConfigParse);
  CHECK(code_of(R"({"source": [[1]], "channel": [[[1]]]})") == ErrorCode::ConfigParse);
  CHECK(code_of(R"({"source": [[1]], "channel": [[["a"]]], "bank": [[[1],[1]],[[1],[1]]]})") ==
        ErrorCode::ConfigParse);
  CHECK(code_of(R"({"source": [[1]], "channel": {"example": {"k1": 0.5, "k2": 0}},
    "bank": [[[1],[1]],[[1],[1]]]})") == ErrorCode::ParameterOutOfRange);
  CHECK(code_of(R"({"source": [[1]], "channel": [[[1]]], "bank": [[[1],[1]],[[1],[1]]],
    "solver": {"tol_rhoo": 1}})") == ErrorCode::ConfigParse);
  CHECK(code_of(R"({"source": [[1]], "channel": [[[1]]], "bank": [[[1],[1]],[[1],[1]]],
    "solver": {"jobs": 0}})") == ErrorCode::ParameterOutOfRange);

  try {
    parse_config(R"({"source": [[0.6, 0.5], [0, 0]], "channel": [[[0.9, 0.0]]],
      "bank": [[[1],[1]],[[1],[1]]]})");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.violations().size() >= 2);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("report JSON writes infinities as strings") {
  ExponentReport r{};
  r.exponent = ExponentValue::pos_inf();
  r.residuals = {kInf, 0.0};
  r.table_f[0][1] = ExponentValue::pos_inf();
  r.table_f[2][0] = {0.25, 0.5, std::array<double, 2>{0.0, 1.5}};
  const auto j = nlohmann::json::parse(report_to_json(r));
  CHECK(j["exponent"] == "inf");
  CHECK(j["residuals"][0] == "inf");
  CHECK(j["table_f"]["user1"][1]["value"] == "inf");
  CHECK(j["table_f"]["both"][0]["rho"] == 0.5);
  CHECK(j["table_f"]["both"][0]["lambda"][1] == 1.5);
  CHECK_FALSE(j.contains("grid_check"));
}
