#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "logicut/oracles/facility.hpp"
#include "logicut/rng.hpp"

using logicut::FacilityInstance;
using logicut::FacilityOracle;
using logicut::InfeasibilityCutKind;
using logicut::Regularizer;
using logicut::SubproblemStatus;

namespace {

FacilityInstance single_pair() {
  FacilityInstance inst;
  inst.transport = Eigen::MatrixXd::Constant(1, 1, 2.0);
  inst.capacity = Eigen::VectorXd::Constant(1, 10.0);
  inst.demand = Eigen::VectorXd::Constant(1, 5.0);
  return inst;
}

// Two facilities with slack capacity (u_i >= total demand): customers
// decouple, so each demand is met by the closed-form single-customer split.
FacilityInstance slack_two_by_two(logicut::Rng& rng) {
  FacilityInstance inst;
  inst.transport.resize(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) inst.transport(i, j) = rng.uniform(1.0, 6.0);
  inst.capacity = Eigen::VectorXd::Constant(2, 20.0);
  inst.demand.resize(2);
  inst.demand << 4.0, 3.0;
  return inst;
}

// Single-customer split between two open facilities under ridge: minimize
// c1 x + c2 (d - x) + (x^2 + (d-x)^2)/(2 gamma) over the cap interval.
double ridge_split(double c1, double c2, double d, double gamma, double cap1, double cap2) {
  const double lo = std::max(0.0, d - cap2);
  const double hi = std::min(cap1, d);
  const double x = std::clamp(0.5 * d + 0.5 * gamma * (c2 - c1), lo, hi);
  return c1 * x + c2 * (d - x) + (x * x + (d - x) * (d - x)) / (2.0 * gamma);
}

}  // namespace

TEST_CASE("single facility ships the demand at linear cost") {
  FacilityOracle oracle(single_pair(), Regularizer::big_m(1.0));
  auto res = oracle.evaluate({1});
  REQUIRE(res.status == SubproblemStatus::Feasible);
  CHECK(res.f_value == doctest::Approx(10.0).epsilon(1e-8));
  CHECK(res.x_star[0] == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("ridge adds the quadratic shipping penalty") {
  FacilityOracle oracle(single_pair(), Regularizer::ridge(2.0));
  auto res = oracle.evaluate({1});
  REQUIRE(res.status == SubproblemStatus::Feasible);
  // 2*5 + 25/(2*2), shipped amount is forced by the demand row.
  CHECK(res.f_value == doctest::Approx(16.25).epsilon(1e-7));
  // alpha = x/gamma on the open arc, cut stays tight at z.
  CHECK(res.alpha_star[0] == doctest::Approx(2.5).epsilon(1e-6));
  Eigen::VectorXd z1 = Eigen::VectorXd::Ones(1);
  CHECK(res.cut.value_at(z1) == doctest::Approx(res.f_value).epsilon(1e-7));
}

TEST_CASE("undersized support yields the monotone cut") {
  FacilityInstance inst;
  inst.transport = Eigen::MatrixXd::Constant(2, 1, 1.0);
  inst.capacity = Eigen::VectorXd::Constant(2, 3.0);
  inst.demand = Eigen::VectorXd::Constant(1, 5.0);
  FacilityOracle oracle(inst, Regularizer::big_m(1.0));
  auto res = oracle.evaluate({1, 0});
  REQUIRE(res.status == SubproblemStatus::Infeasible);
  REQUIRE(res.infeasibility_cut_kind.has_value());
  CHECK(*res.infeasibility_cut_kind == InfeasibilityCutKind::Monotone);
  CHECK(res.cut.coefficients[0] == doctest::Approx(0.0));
  CHECK(res.cut.coefficients[1] == doctest::Approx(1.0));
  CHECK(res.cut.constant == doctest::Approx(1.0));
}

TEST_CASE("slack-capacity instances match per-customer closed forms") {
  logicut::Rng rng(61);
  FacilityInstance inst = slack_two_by_two(rng);

  SUBCASE("big-M routes each customer to the cheapest open facility") {
    FacilityOracle oracle(inst, Regularizer::big_m(1.0));
    for (int mask = 1; mask < 4; ++mask) {
      std::vector<int> z = {mask & 1, (mask >> 1) & 1};
      double expect = 0.0;
      for (int j = 0; j < 2; ++j) {
        double cheapest = logicut::kInf;
        for (int i = 0; i < 2; ++i)
          if (z[i]) cheapest = std::min(cheapest, inst.transport(i, j));
        expect += inst.demand[j] * cheapest;
      }
      CHECK(oracle.evaluate(z).f_value == doctest::Approx(expect).epsilon(1e-7));
    }
  }

  SUBCASE("ridge splits each customer between the open facilities") {
    const double gamma = 1.4;
    FacilityOracle oracle(inst, Regularizer::ridge(gamma));
    for (int mask = 1; mask < 4; ++mask) {
      std::vector<int> z = {mask & 1, (mask >> 1) & 1};
      double expect = 0.0;
      for (int j = 0; j < 2; ++j) {
        const double d = inst.demand[j];
        const double cap0 = std::min(inst.capacity[0], d);
        const double cap1 = std::min(inst.capacity[1], d);
        if (z[0] && z[1])
          expect += ridge_split(inst.transport(0, j), inst.transport(1, j), d, gamma,
                                cap0, cap1);
        else if (z[0])
          expect += inst.transport(0, j) * d + d * d / (2.0 * gamma);
        else
          expect += inst.transport(1, j) * d + d * d / (2.0 * gamma);
      }
      CHECK(oracle.evaluate(z).f_value == doctest::Approx(expect).epsilon(1e-6));
    }
  }
}

TEST_CASE("binding capacity reroutes the cheaper-to-move customer") {
  FacilityInstance inst;
  inst.transport.resize(2, 2);
  inst.transport << 1.0, 2.0, 5.0, 3.0;
  inst.capacity.resize(2);
  inst.capacity << 6.0, 10.0;
  inst.demand.resize(2);
  inst.demand << 5.0, 4.0;
  FacilityOracle oracle(inst, Regularizer::big_m(1.0));
  // Facility 1 is cheapest for both customers but holds only 6 of 9; customer
  // 2 overflows to facility 2 at the smaller detour.
  CHECK(oracle.evaluate({1, 1}).f_value == doctest::Approx(16.0).epsilon(1e-7));
  CHECK(oracle.evaluate({0, 1}).f_value == doctest::Approx(37.0).epsilon(1e-7));
  CHECK(oracle.evaluate({1, 0}).status == SubproblemStatus::Infeasible);
}

TEST_CASE("scaled caps turn a fractional point into a min-cut inequality") {
  FacilityInstance inst;
  inst.transport = Eigen::MatrixXd::Constant(2, 1, 1.0);
  inst.capacity = Eigen::VectorXd::Constant(2, 3.0);
  inst.demand = Eigen::VectorXd::Constant(1, 5.0);
  FacilityOracle oracle(inst, Regularizer::big_m(1.0));
  Eigen::VectorXd z(2);
  z << 0.5, 0.5;
  auto res = oracle.evaluate_fractional(z);
  REQUIRE(res.status == SubproblemStatus::Infeasible);
  // Each open arc moves at most min(u, d) z = 1.5, so 3 < 5 units arrive; the
  // cut demands 3 z_1 + 3 z_2 >= 5.
  CHECK(res.cut.coefficients[0] == doctest::Approx(3.0));
  CHECK(res.cut.coefficients[1] == doctest::Approx(3.0));
  CHECK(res.cut.constant == doctest::Approx(5.0));
  CHECK(!res.cut.admits(z));
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
  CHECK(res.cut.admits(ones));
}

TEST_CASE("ridge fractional shortfall yields the aggregate capacity cut") {
  FacilityInstance inst;
  inst.transport = Eigen::MatrixXd::Constant(2, 1, 1.0);
  inst.capacity = Eigen::VectorXd::Constant(2, 3.0);
  inst.demand = Eigen::VectorXd::Constant(1, 5.0);
  FacilityOracle oracle(inst, Regularizer::ridge(1.0));
  Eigen::VectorXd z(2);
  z << 0.3, 0.0;
  auto res = oracle.evaluate_fractional(z);
  REQUIRE(res.status == SubproblemStatus::Infeasible);
  CHECK(res.cut.coefficients[0] == doctest::Approx(3.0));
  CHECK(res.cut.coefficients[1] == doctest::Approx(3.0));
  CHECK(res.cut.constant == doctest::Approx(5.0));
  CHECK(!res.cut.admits(z));
}

TEST_CASE("instance validation rejects impossible demand") {
  FacilityInstance inst;
  inst.transport = Eigen::MatrixXd::Constant(1, 1, 1.0);
  inst.capacity = Eigen::VectorXd::Constant(1, 2.0);
  inst.demand = Eigen::VectorXd::Constant(1, 5.0);
  CHECK_THROWS_AS(FacilityOracle(inst, Regularizer::big_m(1.0)), std::invalid_argument);
}

TEST_CASE("binary and fractional evaluation agree on binary points") {
  logicut::Rng rng(62);
  FacilityInstance inst = slack_two_by_two(rng);
  for (auto reg : {Regularizer::ridge(1.1), Regularizer::big_m(1.0)}) {
    FacilityOracle oracle(inst, reg);
    for (int mask = 1; mask < 4; ++mask) {
      std::vector<int> z = {mask & 1, (mask >> 1) & 1};
      Eigen::VectorXd zf(2);
      zf << z[0], z[1];
      const double a = oracle.evaluate(z).f_value;
      const double b = oracle.evaluate_fractional(zf).f_value;
      CHECK(std::abs(a - b) <= 1e-8 * (1.0 + std::abs(a)));
      // Shipments land on open rows and meet every demand.
      auto res = oracle.evaluate(z);
      for (int j = 0; j < 2; ++j) {
        double arrived = 0.0;
        for (int i = 0; i < 2; ++i) arrived += res.x_star[i * 2 + j];
        CHECK(arrived == doctest::Approx(inst.demand[j]).epsilon(1e-6));
      }
    }
  }
}
