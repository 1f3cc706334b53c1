#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "logicut/lp.hpp"
#include "logicut/oracles/bqp.hpp"
#include "logicut/rng.hpp"

using logicut::BqpInstance;
using logicut::BqpOracle;
using logicut::LinearProgram;
using logicut::Regularizer;
using logicut::SubproblemStatus;

namespace {

BqpInstance two_by_two() {
  BqpInstance inst;
  inst.Q.resize(2, 2);
  inst.Q << 1.0, -2.0, -2.0, 1.0;
  return inst;
}

// Product linearization solved as an LP with z pinned: minimize
// sum_i Q_ii z_i + sum_{i<j} 2 Q_ij y_ij over y in the product envelope
// y >= 0, y >= z_i + z_j - 1, y <= z_i, y <= z_j.
double envelope_lp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& z) {
  const int n = static_cast<int>(Q.rows());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (Q(i, j) != 0.0) pairs.emplace_back(i, j);
  const int m = static_cast<int>(pairs.size());
  double constant = 0.0;
  for (int i = 0; i < n; ++i) constant += Q(i, i) * z[i];
  if (m == 0) return constant;

  LinearProgram lp = LinearProgram::make(m);
  lp.C_in = Eigen::MatrixXd::Zero(3 * m, m);
  lp.g_in.resize(3 * m);
  for (int k = 0; k < m; ++k) {
    auto [i, j] = pairs[k];
    lp.c[k] = 2.0 * Q(i, j);
    lp.lo[k] = 0.0;
    lp.C_in(3 * k, k) = 1.0;
    lp.g_in[3 * k] = z[i];
    lp.C_in(3 * k + 1, k) = 1.0;
    lp.g_in[3 * k + 1] = z[j];
    lp.C_in(3 * k + 2, k) = -1.0;
    lp.g_in[3 * k + 2] = -(z[i] + z[j] - 1.0);
  }
  auto sol = logicut::simplex_solve(lp, 1e-9);
  REQUIRE(sol.status == logicut::KernelStatus::Optimal);
  return constant + sol.objective;
}

}  // namespace

TEST_CASE("binary values reproduce the quadratic form") {
  BqpOracle oracle(two_by_two(), Regularizer::big_m(1.0));
  CHECK(oracle.evaluate({0, 0}).f_value == doctest::Approx(0.0));
  CHECK(oracle.evaluate({1, 0}).f_value == doctest::Approx(1.0));
  CHECK(oracle.evaluate({0, 1}).f_value == doctest::Approx(1.0));
  CHECK(oracle.evaluate({1, 1}).f_value == doctest::Approx(-2.0));
}

TEST_CASE("maximization is negated into minimization sense") {
  BqpInstance inst = two_by_two();
  inst.maximize = true;
  BqpOracle oracle(inst, Regularizer::big_m(1.0));
  // Internally min z^T(-Q)z, so the reported value is the negated quadratic.
  CHECK(oracle.evaluate({1, 0}).f_value == doctest::Approx(-1.0));
  CHECK(oracle.evaluate({1, 1}).f_value == doctest::Approx(2.0));
}

TEST_CASE("fractional value is the tightened product envelope") {
  BqpOracle oracle(two_by_two(), Regularizer::big_m(1.0));
  Eigen::VectorXd z(2);
  z << 0.5, 0.5;
  auto res = oracle.evaluate_fractional(z);
  REQUIRE(res.status == SubproblemStatus::Feasible);
  // Negative product cost pulls y up to min(z_i, z_j) = 0.5.
  CHECK(res.f_value == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(res.f_value == doctest::Approx(envelope_lp(two_by_two().Q, z)).epsilon(1e-8));
}

TEST_CASE("random instances agree with the envelope linear program") {
  logicut::Rng rng(65);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 3;
    Eigen::MatrixXd Q(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Q(i, j) = rng.uniform(-2.0, 2.0);
        Q(j, i) = Q(i, j);
      }
    BqpInstance inst;
    inst.Q = Q;
    BqpOracle oracle(inst, Regularizer::big_m(1.0));

    for (int sample = 0; sample < 8; ++sample) {
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z[i] = rng.uniform();
      auto res = oracle.evaluate_fractional(z);
      CHECK(res.f_value == doctest::Approx(envelope_lp(Q, z)).epsilon(1e-8));
      CHECK(res.cut.value_at(z) == doctest::Approx(res.f_value).epsilon(1e-8));
      // The cut is a subgradient inequality of a convex function that matches
      // z^T Q z at binary points, so it must under-estimate all of them.
      for (int mask = 0; mask < (1 << n); ++mask) {
        Eigen::VectorXd zb(n);
        for (int i = 0; i < n; ++i) zb[i] = (mask >> i) & 1;
        const double truth = zb.dot(Q * zb);
        CHECK(truth >= res.cut.value_at(zb) - 1e-9);
      }
    }
  }
}

TEST_CASE("solution mirrors the committed pattern") {
  BqpOracle oracle(two_by_two(), Regularizer::big_m(1.0));
  auto res = oracle.evaluate({1, 0});
  CHECK(res.x_star[0] == doctest::Approx(1.0));
  CHECK(res.x_star[1] == doctest::Approx(0.0));
  CHECK(res.cut.coefficients.size() == 2);
}

TEST_CASE("construction demands the unit-box regularizer and symmetry") {
  CHECK_THROWS_AS(BqpOracle(two_by_two(), Regularizer::ridge(1.0)), std::invalid_argument);
  CHECK_THROWS_AS(BqpOracle(two_by_two(), Regularizer::big_m(2.0)), std::invalid_argument);
  BqpInstance bad = two_by_two();
  bad.Q(0, 1) = 5.0;
  CHECK_THROWS_AS(BqpOracle(bad, Regularizer::big_m(1.0)), std::invalid_argument);
}
