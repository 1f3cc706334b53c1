#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "logicut/instance_io.hpp"
#include "logicut/oracles/netdesign.hpp"

using logicut::InstanceFile;
using logicut::ParsedInstance;
using logicut::ParseError;
using logicut::Regularizer;
using logicut::RegularizerChoice;
using logicut::SubproblemStatus;
using logicut::parse_biqmac;
using logicut::parse_instance;
using logicut::parse_orlib_cap;
using logicut::serialize_instance;

namespace {

// Runs the thunk, expecting a ParseError, and returns its location ("" when
// nothing was thrown) so tests can assert on where an error was reported.
std::string error_location(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.location();
  }
  return "";
}

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimalBqp = R"({"family":"bqp","Q":[[1,-2],[-2,1]],"sense":"min"})";

}  // namespace

TEST_CASE("minimal bqp document yields a two-variable oracle") {
  ParsedInstance parsed = parse_instance(kMinimalBqp);
  CHECK(parsed.file.family() == "bqp");
  CHECK(parsed.oracle->num_binaries() == 2);
  CHECK(parsed.oracle->family() == "bqp");
  CHECK(parsed.oracle->regularizer().is_big_m());
  CHECK(parsed.oracle->regularizer().M() == doctest::Approx(1.0));
  CHECK_FALSE(parsed.maximize);
  CHECK(parsed.feasible.n() == 2);
  CHECK(parsed.feasible.contains({1, 1}));
  CHECK(parsed.master_cost.norm() == 0.0);
  CHECK(parsed.oracle->evaluate({1, 1}).f_value == doctest::Approx(-2.0));
}

TEST_CASE("bqp max sense sets the display flag and flips the oracle") {
  ParsedInstance parsed =
      parse_instance(R"({"family":"bqp","Q":[[1,-2],[-2,1]],"sense":"max"})");
  CHECK(parsed.maximize);
  // Internally the oracle minimizes -Q, so the all-on point now costs +2.
  CHECK(parsed.oracle->evaluate({1, 1}).f_value == doctest::Approx(2.0));
}

TEST_CASE("facility with too little capacity fails instance validation") {
  const std::string text =
      R"({"family":"facility","transport":[[1,2],[5,3]],"capacity":[3,4],"demand":[5,4]})";
  CHECK(error_location([&] { parse_instance(text); }) == "$");
  CHECK(error_message([&] { parse_instance(text); }).find("capacity") != std::string::npos);
}

TEST_CASE("missing required field is reported by name") {
  const std::string message = error_message([] { parse_instance(R"({"family":"bqp"})"); });
  CHECK(message.find("missing field \"Q\"") != std::string::npos);
}

TEST_CASE("malformed json is reported with a line number") {
  const std::string location =
      error_location([] { parse_instance("{\"family\":\"bqp\",\n\"Q\":[[1,") ; });
  CHECK(location == "line 2");
}

TEST_CASE("unknown fields are rejected at every level") {
  CHECK(error_location([] {
          parse_instance(R"({"family":"bqp","Q":[[0]],"bogus":1})");
        }) == "$.bogus");
  CHECK(error_location([] {
          parse_instance(R"({"family":"bqp","Q":[[0]],"feasible_set":{"lo":[0]}})");
        }) == "$.feasible_set.lo");
  CHECK(error_location([] {
          parse_instance(R"({"family":"bqp","Q":[[0]],"regularizer":{"kind":"bigM","m":1}})");
        }) == "$.regularizer.m");
}

TEST_CASE("meta is free-form and survives a round trip") {
  const std::string text =
      R"({"family":"bqp","Q":[[0]],"meta":{"anything":[1,"two",{"three":3}]}})";
  ParsedInstance parsed = parse_instance(text);
  const std::string serialized = serialize_instance(parsed.file);
  ParsedInstance again = parse_instance(serialized);
  CHECK(again.file.doc == parsed.file.doc);
  CHECK(serialize_instance(again.file) == serialized);
}

TEST_CASE("documents with every block round-trip exactly") {
  const std::string text = R"({
    "family": "portfolio",
    "mu": [0.1, 0.2, 0.05],
    "Sigma": [[0.2, 0.01, 0.0], [0.01, 0.3, 0.02], [0.0, 0.02, 0.25]],
    "risk_aversion": 2.5,
    "A": [[1.0, 1.0, 1.0]],
    "row_lower": [1.0],
    "row_upper": [1.0],
    "activation_cost": [0.01, 0.0, 0.02],
    "feasible_set": {"lower": [0, 0, 0], "upper": [1, 1, 1], "cardinality": 2},
    "regularizer": {"kind": "ridge", "gamma": 0.7},
    "meta": {"note": "hand-written"}
  })";
  ParsedInstance parsed = parse_instance(text);
  CHECK(parsed.oracle->family() == "portfolio");
  CHECK(parsed.oracle->regularizer().is_ridge());
  CHECK(parsed.oracle->regularizer().gamma() == doctest::Approx(0.7));
  CHECK(parsed.feasible.cardinality() == 2);
  CHECK(parsed.master_cost[2] == doctest::Approx(0.02));
  const std::string serialized = serialize_instance(parsed.file);
  ParsedInstance again = parse_instance(serialized);
  CHECK(again.file.doc == parsed.file.doc);
  CHECK(serialize_instance(again.file) == serialized);
}

TEST_CASE("feasible set block forces, forbids, and budgets coordinates") {
  const std::string text = R"({
    "family": "erm",
    "X": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    "y": [1, 2, 3],
    "feasible_set": {"lower": [1, 0, 0], "upper": [1, 1, 0], "cardinality": 2}
  })";
  ParsedInstance parsed = parse_instance(text);
  CHECK(parsed.feasible.contains({1, 0, 0}));
  CHECK(parsed.feasible.contains({1, 1, 0}));
  CHECK_FALSE(parsed.feasible.contains({0, 1, 0}));  // coordinate 0 is forced on
  CHECK_FALSE(parsed.feasible.contains({1, 0, 1}));  // coordinate 2 is forbidden
}

TEST_CASE("inconsistent feasible set block is a located error") {
  // Budget below the number of forced coordinates: the set would be empty.
  const std::string text = R"({
    "family": "bqp", "Q": [[0, 0], [0, 0]],
    "feasible_set": {"lower": [1, 1], "cardinality": 1}
  })";
  CHECK(error_location([&] { parse_instance(text); }) == "$.feasible_set");
  CHECK(error_location([] {
          parse_instance(R"({"family":"bqp","Q":[[0]],"feasible_set":{"lower":[2]}})");
        }) == "$.feasible_set.lower[0]");
}

TEST_CASE("regularizer block, natural default, and overrides") {
  const std::string with_block =
      R"({"family":"erm","X":[[1,0],[0,1]],"y":[1,0],"regularizer":{"kind":"bigM","M":3}})";
  ParsedInstance parsed = parse_instance(with_block);
  CHECK(parsed.oracle->regularizer().is_big_m());
  CHECK(parsed.oracle->regularizer().M() == doctest::Approx(3.0));

  // No block: the family's natural regularizer (ridge with unit strength).
  ParsedInstance natural = parse_instance(R"({"family":"erm","X":[[1,0],[0,1]],"y":[1,0]})");
  CHECK(natural.oracle->regularizer().is_ridge());
  CHECK(natural.oracle->regularizer().gamma() == doctest::Approx(1.0));

  // A concrete override beats the block; an empty choice forces natural.
  ParsedInstance overridden =
      parse_instance(with_block, RegularizerChoice{Regularizer::ridge(0.25)});
  CHECK(overridden.oracle->regularizer().is_ridge());
  CHECK(overridden.oracle->regularizer().gamma() == doctest::Approx(0.25));
  ParsedInstance forced_natural = parse_instance(with_block, RegularizerChoice{});
  CHECK(forced_natural.oracle->regularizer().is_ridge());
  CHECK(forced_natural.oracle->regularizer().gamma() == doctest::Approx(1.0));
}

TEST_CASE("unit commitment payload spans generators times periods") {
  const std::string text = R"({
    "family": "uc",
    "quad_cost": [1.0, 2.0],
    "lin_cost": [0.5, 0.1],
    "max_output": [4.0, 6.0],
    "demand": [3.0, 5.0, 2.0]
  })";
  ParsedInstance parsed = parse_instance(text);
  CHECK(parsed.oracle->family() == "unitcommitment");
  CHECK(parsed.oracle->num_binaries() == 6);
  CHECK(parsed.oracle->regularizer().is_big_m());
  CHECK(parsed.oracle->regularizer().M() == doctest::Approx(6.0));
}

TEST_CASE("netdesign payload defaults the quadratic cost to diag(d)") {
  const std::string text = R"({
    "family": "netdesign",
    "num_nodes": 3,
    "edges": [[0, 1], [1, 2], [0, 2]],
    "d": [1.0, 2.0, 4.0],
    "u": [10.0, 10.0, 10.0],
    "penalty": 100.0,
    "b": [[1.0], [0.0], [-1.0]],
    "build_cost": [0.5, 0.5, 0.9]
  })";
  ParsedInstance parsed = parse_instance(text);
  CHECK(parsed.oracle->num_binaries() == 3);
  CHECK(parsed.master_cost[2] == doctest::Approx(0.9));
  const auto& oracle = dynamic_cast<const logicut::NetdesignOracle&>(*parsed.oracle);
  CHECK(oracle.instance().Q(0, 0) == doctest::Approx(1.0));
  CHECK(oracle.instance().Q(2, 2) == doctest::Approx(4.0));
  CHECK(oracle.instance().Q(0, 1) == 0.0);
  CHECK(oracle.instance().penalty == doctest::Approx(100.0));
}

TEST_CASE("dimension mismatches name the offending field") {
  CHECK(error_location([] {
          parse_instance(R"({"family":"erm","X":[[1,0],[0,1]],"y":[1,0,3]})");
        }) == "$.y");
  CHECK(error_location([] {
          parse_instance(R"({"family":"portfolio","mu":[0.1,0.2],"Sigma":[[1.0]]})");
        }) == "$.Sigma");
  CHECK(error_location([] {
          parse_instance(
              R"({"family":"facility","transport":[[1],[2]],"capacity":[9],"demand":[1]})");
        }) == "$.capacity");
  CHECK(error_location([] {
          parse_instance(R"({"family":"bqp","Q":[[1,2],[2]]})");
        }) == "$.Q[1]");
  CHECK(error_location([] {
          parse_instance(R"({"family":"netdesign","num_nodes":2,"edges":[[0,5]],
                             "d":[1],"u":[1],"b":[[1],[-1]]})");
        }) == "$.edges[0]");
}

TEST_CASE("unknown family is rejected") {
  CHECK(error_location([] { parse_instance(R"({"family":"knapsack"})"); }) == "$.family");
}

TEST_CASE("orlib capacitated warehouse format parses the worked example") {
  InstanceFile file = parse_orlib_cap("2 1\n10 100\n10 100\n5\n2 3\n");
  CHECK(file.family() == "facility");
  CHECK(file.doc["capacity"] == nlohmann::json({10.0, 10.0}));
  CHECK(file.doc["open_cost"] == nlohmann::json({100.0, 100.0}));
  CHECK(file.doc["demand"] == nlohmann::json({5.0}));
  CHECK(file.doc["transport"] == nlohmann::json({{2.0}, {3.0}}));

  // The numbers are whitespace-agnostic: one line parses identically.
  InstanceFile flat = parse_orlib_cap("2 1 10 100 10 100 5 2 3");
  CHECK(flat.doc == file.doc);

  // Optional per-unit conversion divides each cost by the customer demand.
  InstanceFile unit = parse_orlib_cap("2 1\n10 100\n10 100\n5\n2 3\n", true);
  CHECK(unit.doc["transport"] == nlohmann::json({{0.4}, {0.6}}));
}

TEST_CASE("orlib output survives the json round trip") {
  InstanceFile file = parse_orlib_cap("2 2\n10 100\n10 100\n5\n2 3\n4\n1 7\n");
  const std::string serialized = serialize_instance(file);
  ParsedInstance parsed = parse_instance(serialized);
  CHECK(parsed.oracle->family() == "facility");
  CHECK(parsed.file.doc == file.doc);
  CHECK(serialize_instance(parsed.file) == serialized);
  CHECK(parsed.master_cost[0] == doctest::Approx(100.0));
}

TEST_CASE("orlib parse errors carry line numbers and names") {
  CHECK(error_location([] { parse_orlib_cap(""); }) == "line 1");
  // Missing the second warehouse's fixed cost: the error names it.
  const std::string message =
      error_message([] { parse_orlib_cap("2 1\n10 100\n10\n"); });
  CHECK(message.find("line 3") != std::string::npos);
  CHECK(message.find("fixed cost") != std::string::npos);
  CHECK(message.find("warehouse 2") != std::string::npos);
  // A non-numeric token names itself.
  CHECK(error_message([] { parse_orlib_cap("2 1\n10 abc\n10 100\n5\n2 3\n"); })
            .find("\"abc\"") != std::string::npos);
  // Trailing junk is an error, not silently ignored.
  CHECK(error_location([] { parse_orlib_cap("2 1\n10 100\n10 100\n5\n2 3\n9\n"); }) == "line 6");
}

TEST_CASE("biqmac sparse format fills both triangles") {
  InstanceFile file = parse_biqmac("2 1\n1 2 -2\n");
  CHECK(file.family() == "bqp");
  CHECK(file.doc["sense"] == "max");
  CHECK(file.doc["Q"] == nlohmann::json({{0.0, -2.0}, {-2.0, 0.0}}));

  InstanceFile with_diagonal = parse_biqmac("2 2\n1 1 3\n1 2 -2\n");
  CHECK(with_diagonal.doc["Q"] == nlohmann::json({{3.0, -2.0}, {-2.0, 0.0}}));
}

TEST_CASE("biqmac duplicates warn and keep the last value") {
  std::vector<std::string> warnings;
  InstanceFile file = parse_biqmac("2 2\n1 2 -2\n2 1 5\n", &warnings);
  CHECK(file.doc["Q"] == nlohmann::json({{0.0, 5.0}, {5.0, 0.0}}));
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("duplicate") != std::string::npos);
  CHECK(warnings[0].find("line 3") != std::string::npos);
}

TEST_CASE("biqmac rejects out-of-range indices and bad headers") {
  CHECK(error_message([] { parse_biqmac("2 1\n1 3 1\n"); }).find("out of range") !=
        std::string::npos);
  CHECK(error_location([] { parse_biqmac("2 1\n0 1 1\n"); }) == "line 2");
  CHECK(error_location([] { parse_biqmac(""); }) == "line 1");
  CHECK(error_message([] { parse_biqmac("2 2\n1 2 -2\n"); })
            .find("unexpected end of input") != std::string::npos);
}

TEST_CASE("biqmac output parses into a maximization bqp oracle") {
  InstanceFile file = parse_biqmac("3 2\n1 2 4\n2 3 -1\n");
  ParsedInstance parsed = parse_instance(serialize_instance(file));
  CHECK(parsed.maximize);
  CHECK(parsed.oracle->num_binaries() == 3);
  CHECK(parsed.file.doc == file.doc);
}
