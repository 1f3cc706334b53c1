#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "logicut/generators.hpp"
#include "logicut/instance_io.hpp"
#include "logicut/regularizer.hpp"

using logicut::GeneratorSpec;
using logicut::InstanceFile;
using logicut::ParsedInstance;
using logicut::generate_erm;
using logicut::generate_netdesign;
using logicut::parse_instance;
using logicut::serialize_instance;

namespace {

GeneratorSpec netdesign_spec(int nodes, int extra, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.nodes = nodes;
  spec.extra_edge_multiplier = extra;
  spec.seed = seed;
  return spec;
}

GeneratorSpec erm_spec(int samples, int features, int sparsity, double snr, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.samples = samples;
  spec.features = features;
  spec.sparsity = sparsity;
  spec.snr = snr;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("netdesign generation is deterministic per seed") {
  const std::string first = serialize_instance(generate_netdesign(netdesign_spec(5, 1, 42)));
  const std::string second = serialize_instance(generate_netdesign(netdesign_spec(5, 1, 42)));
  CHECK(first == second);
  const std::string other = serialize_instance(generate_netdesign(netdesign_spec(5, 1, 43)));
  CHECK(first != other);
}

TEST_CASE("netdesign with four nodes and no extras forces a spanning tree") {
  InstanceFile file = generate_netdesign(netdesign_spec(4, 0, 7));
  const auto& doc = file.doc;
  CHECK(doc.at("num_nodes") == 4);
  CHECK(doc.at("edges").size() == 6);  // all pairs of four nodes
  const std::vector<int> lower = doc.at("feasible_set").at("lower").get<std::vector<int>>();
  CHECK(std::count(lower.begin(), lower.end(), 1) == 3);  // tree edges forced on
  // 5% slack on three existing edges rounds down to a budget of three.
  CHECK(doc.at("feasible_set").at("cardinality") == 3);
  CHECK(doc.at("penalty") == 1000.0);
}

TEST_CASE("netdesign demands are balanced integers from the documented range") {
  InstanceFile file = generate_netdesign(netdesign_spec(6, 1, 11));
  const int m = 6;
  const auto& rows = file.doc.at("b");
  REQUIRE(rows.size() == 6);
  double total_demand = 0.0;
  for (int j = 0; j < m; ++j) {
    double column_sum = 0.0;
    for (int node = 0; node < m; ++node) {
      const double entry = rows[node][j].get<double>();
      column_sum += entry;
      if (node != j) {
        CHECK(entry == doctest::Approx(std::round(entry)));  // integer demand
        CHECK(entry >= 5.0);
        CHECK(entry <= 25.0);
        total_demand += entry;
      } else {
        CHECK(entry < 0.0);  // the source balances its own column
      }
    }
    CHECK(column_sum == doctest::Approx(0.0).epsilon(1e-12));
  }
  // The recorded big-M equals the total demand; the matching ridge strength
  // for the pair experiments is kept in meta.
  CHECK(file.doc.at("regularizer").at("M").get<double>() == doctest::Approx(total_demand));
  CHECK(file.doc.at("meta").at("ridge_gamma").get<double>() == doctest::Approx(2.0 / (6.0 * 5.0)));
}

TEST_CASE("netdesign extras and slack widen the existing network and budget") {
  InstanceFile with_extras = generate_netdesign(netdesign_spec(5, 1, 3));
  const std::vector<int> lower =
      with_extras.doc.at("feasible_set").at("lower").get<std::vector<int>>();
  // Tree (4 edges) plus 5 extras, capped by the 10 available pairs.
  CHECK(std::count(lower.begin(), lower.end(), 1) == 9);

  GeneratorSpec loose = netdesign_spec(4, 0, 7);
  loose.cardinality_slack = 0.5;
  InstanceFile file = generate_netdesign(loose);
  CHECK(file.doc.at("feasible_set").at("cardinality") == 4);  // floor(1.5 * 3)
}

TEST_CASE("netdesign build costs sit in the documented range and files validate") {
  InstanceFile file = generate_netdesign(netdesign_spec(5, 0, 19));
  for (const auto& cost : file.doc.at("build_cost")) {
    CHECK(cost.get<double>() >= 1.0);
    CHECK(cost.get<double>() <= 4.0);
  }
  ParsedInstance parsed = parse_instance(serialize_instance(file));
  CHECK(parsed.oracle->family() == "netdesign");
  CHECK(parsed.oracle->num_binaries() == 10);
  CHECK(parsed.oracle->regularizer().is_big_m());
  CHECK(parsed.feasible.cardinality().has_value());
}

TEST_CASE("erm generation is deterministic per seed") {
  const std::string first = serialize_instance(generate_erm(erm_spec(12, 6, 2, 6.0, 5)));
  const std::string second = serialize_instance(generate_erm(erm_spec(12, 6, 2, 6.0, 5)));
  CHECK(first == second);
  CHECK(first != serialize_instance(generate_erm(erm_spec(12, 6, 2, 6.0, 6))));
}

TEST_CASE("erm documents have the requested shape and a recorded support") {
  InstanceFile file = generate_erm(erm_spec(12, 6, 2, 6.0, 5));
  CHECK(file.doc.at("X").size() == 12);
  CHECK(file.doc.at("X")[0].size() == 6);
  CHECK(file.doc.at("y").size() == 12);
  CHECK(file.doc.at("loss") == "ols");
  CHECK(file.doc.at("feasible_set").at("cardinality") == 2);
  const std::vector<int> support =
      file.doc.at("meta").at("true_support").get<std::vector<int>>();
  REQUIRE(support.size() == 2);
  CHECK(std::is_sorted(support.begin(), support.end()));
  CHECK(support.front() >= 0);
  CHECK(support.back() < 6);
  CHECK(support[0] != support[1]);
  ParsedInstance parsed = parse_instance(serialize_instance(file));
  CHECK(parsed.oracle->num_binaries() == 6);
}

TEST_CASE("infinite snr yields exactly noiseless responses with unit weights") {
  GeneratorSpec spec = erm_spec(15, 7, 3, logicut::kInf, 21);
  InstanceFile file = generate_erm(spec);
  CHECK(file.doc.at("meta").contains("snr") == false);  // not representable in JSON
  Eigen::MatrixXd x(15, 7);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 7; ++j) x(i, j) = file.doc.at("X")[i][j].get<double>();
  Eigen::VectorXd y(15);
  for (int i = 0; i < 15; ++i) y[i] = file.doc.at("y")[i].get<double>();
  const std::vector<int> support =
      file.doc.at("meta").at("true_support").get<std::vector<int>>();
  REQUIRE(support.size() == 3);
  // y = Xw exactly, so least squares on the support recovers w with +-1
  // entries and zero residual.
  Eigen::MatrixXd xs(15, 3);
  for (int t = 0; t < 3; ++t) xs.col(t) = x.col(support[t]);
  const Eigen::VectorXd w = xs.colPivHouseholderQr().solve(y);
  CHECK((xs * w - y).norm() == doctest::Approx(0.0).epsilon(1e-9));
  for (int t = 0; t < 3; ++t) CHECK(std::abs(w[t]) == doctest::Approx(1.0));
}

TEST_CASE("classification responses are sign labels with the hinge loss") {
  GeneratorSpec spec = erm_spec(20, 5, 2, 5.0, 9);
  spec.classification = true;
  InstanceFile file = generate_erm(spec);
  CHECK(file.doc.at("loss") == "svm");
  for (const auto& label : file.doc.at("y"))
    CHECK(std::abs(label.get<double>()) == doctest::Approx(1.0));
}

TEST_CASE("erm rejects a support larger than the feature count") {
  CHECK_THROWS_AS(generate_erm(erm_spec(10, 4, 5, 6.0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(generate_netdesign(netdesign_spec(1, 0, 1)), std::invalid_argument);
}
