#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "logicut/lp.hpp"
#include "logicut/rng.hpp"

using logicut::KernelSolution;
using logicut::KernelStatus;
using logicut::kInf;
using logicut::LinearProgram;
using logicut::simplex_solve;
using logicut::SimplexOptions;
using logicut::VarStatus;

namespace {

// Full optimality certificate: primal feasibility, dual sign feasibility,
// stationarity, and strong duality. Together these prove the reported point
// is optimal without an external reference solver.
void check_optimal_certificate(const LinearProgram& lp, const KernelSolution& sol,
                               double tol = 1e-6) {
  REQUIRE(sol.status == KernelStatus::Optimal);
  const int n = lp.num_vars();
  for (int j = 0; j < n; ++j) {
    CHECK(sol.x[j] >= lp.lo[j] - 1e-7);
    CHECK(sol.x[j] <= lp.hi[j] + 1e-7);
  }
  if (lp.num_eq() > 0) CHECK((lp.A_eq * sol.x - lp.b_eq).lpNorm<Eigen::Infinity>() < 1e-7);
  for (int i = 0; i < lp.num_ineq(); ++i) {
    double slack = lp.g_in[i] - lp.C_in.row(i).dot(sol.x);
    CHECK(slack > -1e-7);
    CHECK(sol.ineq_duals[i] >= 0.0);
    CHECK(std::abs(sol.ineq_duals[i] * slack) < tol);  // complementary slackness
  }
  // stationarity: c = A_eq^T y - C_in^T lambda + reduced_costs
  Eigen::VectorXd stat = lp.c;
  if (lp.num_eq() > 0) stat -= lp.A_eq.transpose() * sol.eq_duals;
  if (lp.num_ineq() > 0) stat += lp.C_in.transpose() * sol.ineq_duals;
  stat -= sol.reduced_costs;
  CHECK(stat.lpNorm<Eigen::Infinity>() < tol);
  double dual_obj = 0.0;
  if (lp.num_eq() > 0) dual_obj += lp.b_eq.dot(sol.eq_duals);
  if (lp.num_ineq() > 0) dual_obj -= lp.g_in.dot(sol.ineq_duals);
  for (int j = 0; j < n; ++j) dual_obj += sol.reduced_costs[j] * sol.x[j];
  CHECK(sol.objective == doctest::Approx(dual_obj).epsilon(1e-6));
  CHECK(sol.objective == doctest::Approx(lp.c.dot(sol.x)).epsilon(1e-9));
}

LinearProgram random_feasible_lp(logicut::Rng& rng, int n, int m_eq, int m_in) {
  LinearProgram lp = LinearProgram::make(n);
  Eigen::VectorXd x0(n);
  for (int j = 0; j < n; ++j) {
    lp.lo[j] = 0.0;
    lp.hi[j] = rng.uniform(0.5, 3.0);
    x0[j] = rng.uniform(0.0, lp.hi[j]);
    lp.c[j] = rng.uniform(-2.0, 2.0);
  }
  lp.A_eq.resize(m_eq, n);
  lp.b_eq.resize(m_eq);
  for (int i = 0; i < m_eq; ++i) {
    for (int j = 0; j < n; ++j) lp.A_eq(i, j) = rng.uniform(-1.0, 1.0);
    lp.b_eq[i] = lp.A_eq.row(i).dot(x0);
  }
  lp.C_in.resize(m_in, n);
  lp.g_in.resize(m_in);
  for (int i = 0; i < m_in; ++i) {
    for (int j = 0; j < n; ++j) lp.C_in(i, j) = rng.uniform(-1.0, 1.0);
    lp.g_in[i] = lp.C_in.row(i).dot(x0) + rng.uniform(0.05, 1.0);
  }
  return lp;
}

}  // namespace

TEST_CASE("two-variable knapsack vertex") {
  // min -2x1 - x2  s.t.  x1 + x2 <= 1, x >= 0  ->  x = (1,0), value -2
  LinearProgram lp = LinearProgram::make(2);
  lp.c << -2.0, -1.0;
  lp.C_in.resize(1, 2);
  lp.C_in << 1.0, 1.0;
  lp.g_in.resize(1);
  lp.g_in << 1.0;
  lp.lo << 0.0, 0.0;
  KernelSolution sol = simplex_solve(lp, 1e-9);
  REQUIRE(sol.status == KernelStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(0.0));
  CHECK(sol.objective == doctest::Approx(-2.0));
  CHECK(sol.ineq_duals[0] == doctest::Approx(2.0));
  CHECK(sol.reduced_costs[1] == doctest::Approx(1.0));
  check_optimal_certificate(lp, sol);
}

TEST_CASE("empty box is infeasible") {
  // min 0 s.t. x <= -1, x >= 0
  LinearProgram lp = LinearProgram::make(1);
  lp.lo << 0.0;
  lp.hi << -1.0;
  CHECK(simplex_solve(lp, 1e-9).status == KernelStatus::Infeasible);
}

TEST_CASE("row-induced infeasibility yields a Farkas certificate") {
  // x1 + x2 = 3 with x in [0,1]^2
  LinearProgram lp = LinearProgram::make(2);
  lp.A_eq.resize(1, 2);
  lp.A_eq << 1.0, 1.0;
  lp.b_eq.resize(1);
  lp.b_eq << 3.0;
  lp.lo << 0.0, 0.0;
  lp.hi << 1.0, 1.0;
  KernelSolution sol = simplex_solve(lp, 1e-9);
  REQUIRE(sol.status == KernelStatus::Infeasible);
  REQUIRE(sol.certificate.size() == 1);
  // pi^T b must exceed the box maximum of pi^T (A x)
  double pi = sol.certificate[0];
  double support = std::max(pi * 1.0, 0.0) + std::max(pi * 1.0, 0.0);  // per-coordinate max
  CHECK(pi * 3.0 > support + 1e-9);
}

TEST_CASE("missing upper bound makes the one-variable LP unbounded") {
  LinearProgram lp = LinearProgram::make(1);
  lp.c << -1.0;
  lp.lo << 0.0;
  KernelSolution sol = simplex_solve(lp, 1e-9);
  REQUIRE(sol.status == KernelStatus::Unbounded);
  REQUIRE(sol.certificate.size() == 1);
  CHECK(sol.certificate[0] > 0.0);  // improving ray pushes x up
}

TEST_CASE("unbounded ray respects the constraint rows") {
  // min -x1 - x2 s.t. x1 - x2 <= 1, x >= 0: ray along (1,1)
  LinearProgram lp = LinearProgram::make(2);
  lp.c << -1.0, -1.0;
  lp.C_in.resize(1, 2);
  lp.C_in << 1.0, -1.0;
  lp.g_in.resize(1);
  lp.g_in << 1.0;
  lp.lo << 0.0, 0.0;
  KernelSolution sol = simplex_solve(lp, 1e-9);
  REQUIRE(sol.status == KernelStatus::Unbounded);
  REQUIRE(sol.certificate.size() == 2);
  CHECK(lp.c.dot(sol.certificate) < -1e-9);
  CHECK(lp.C_in.row(0).dot(sol.certificate) <= 1e-9);
  CHECK(sol.certificate.minCoeff() >= -1e-9);
}

TEST_CASE("equality with mixed bounds hits the upper bound") {
  // min -x1 - 2x2  s.t. x1 + x2 = 2, x1 - x2 <= 1, x1 in [0,3], x2 in [0,1.2]
  LinearProgram lp = LinearProgram::make(2);
  lp.c << -1.0, -2.0;
  lp.A_eq.resize(1, 2);
  lp.A_eq << 1.0, 1.0;
  lp.b_eq.resize(1);
  lp.b_eq << 2.0;
  lp.C_in.resize(1, 2);
  lp.C_in << 1.0, -1.0;
  lp.g_in.resize(1);
  lp.g_in << 1.0;
  lp.lo << 0.0, 0.0;
  lp.hi << 3.0, 1.2;
  KernelSolution sol = simplex_solve(lp, 1e-9);
  REQUIRE(sol.status == KernelStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(0.8));
  CHECK(sol.x[1] == doctest::Approx(1.2));
  CHECK(sol.objective == doctest::Approx(-3.2));
  CHECK(sol.eq_duals[0] == doctest::Approx(-1.0));
  CHECK(sol.bound_duals[1] == doctest::Approx(1.0));
  CHECK(sol.var_status[1] == VarStatus::AtUpper);
  check_optimal_certificate(lp, sol);
}

TEST_CASE("free variables pass through phase one") {
  LinearProgram lp = LinearProgram::make(2);
  lp.c << 1.0, 1.0;
  lp.C_in.resize(1, 2);
  lp.C_in << -1.0, -1.0;  // x1 + x2 >= 1
  lp.g_in.resize(1);
  lp.g_in << -1.0;
  KernelSolution sol = simplex_solve(lp, 1e-9);
  REQUIRE(sol.status == KernelStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  check_optimal_certificate(lp, sol);
}

TEST_CASE("degenerate pricing cycle is broken") {
  // Classic cycling instance for Dantzig pricing; the degenerate-pivot
  // counter must flip to Bland's rule and terminate at value -1/20.
  LinearProgram lp = LinearProgram::make(4);
  lp.c << -0.75, 150.0, -0.02, 6.0;
  lp.C_in.resize(3, 4);
  lp.C_in << 0.25, -60.0, -1.0 / 25.0, 9.0,
             0.5, -90.0, -1.0 / 50.0, 3.0,
             0.0, 0.0, 1.0, 0.0;
  lp.g_in.resize(3);
  lp.g_in << 0.0, 0.0, 1.0;
  lp.lo.setZero();
  KernelSolution sol = simplex_solve(lp, 1e-9);
  REQUIRE(sol.status == KernelStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-0.05));
  check_optimal_certificate(lp, sol);
}

TEST_CASE("random feasible LPs satisfy the full optimality certificate") {
  logicut::Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    int n = rng.uniform_int(2, 6);
    int m_eq = rng.uniform_int(0, std::max(0, n - 2));
    int m_in = rng.uniform_int(0, 4);
    LinearProgram lp = random_feasible_lp(rng, n, m_eq, m_in);
    KernelSolution sol = simplex_solve(lp, 1e-9);
    check_optimal_certificate(lp, sol);
  }
}

TEST_CASE("identical inputs give bit-identical solutions") {
  logicut::Rng rng(5);
  LinearProgram lp = random_feasible_lp(rng, 5, 1, 3);
  KernelSolution a = simplex_solve(lp, 1e-9);
  KernelSolution b = simplex_solve(lp, 1e-9);
  REQUIRE(a.status == b.status);
  CHECK(a.x == b.x);
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("warm start from the optimal basis needs no pivots") {
  logicut::Rng rng(9);
  LinearProgram lp = random_feasible_lp(rng, 5, 1, 3);
  KernelSolution first = simplex_solve(lp, 1e-9);
  REQUIRE(first.status == KernelStatus::Optimal);

  SimplexOptions opts;
  opts.warm_start = &first.var_status;
  KernelSolution again = simplex_solve(lp, opts);
  REQUIRE(again.status == KernelStatus::Optimal);
  CHECK(again.iterations == 0);
  CHECK(again.objective == doctest::Approx(first.objective));

  SUBCASE("appending a violated row falls back to a correct solve") {
    LinearProgram cutlp = lp;
    int m = lp.num_ineq();
    cutlp.C_in.conservativeResize(m + 1, lp.num_vars());
    cutlp.g_in.conservativeResize(m + 1);
    // cut off the current optimum: c^T x >= old objective + margin is
    // emulated by bounding a coordinate direction that was at its bound
    cutlp.C_in.row(m) = Eigen::VectorXd::Zero(lp.num_vars());
    int j_at_bound = 0;
    for (int j = 0; j < lp.num_vars(); ++j) {
      if (first.var_status[j] == VarStatus::AtUpper) j_at_bound = j;
    }
    cutlp.C_in(m, j_at_bound) = 1.0;
    cutlp.g_in[m] = first.x[j_at_bound] - 0.25;
    KernelSolution warm = simplex_solve(cutlp, opts);
    KernelSolution cold = simplex_solve(cutlp, 1e-9);
    REQUIRE(warm.status == cold.status);
    if (cold.status == KernelStatus::Optimal) {
      CHECK(warm.objective == doctest::Approx(cold.objective));
      check_optimal_certificate(cutlp, warm);
    }
  }
}

TEST_CASE("no-row LP reads the answer off the bounds") {
  LinearProgram lp = LinearProgram::make(3);
  lp.c << 1.0, -1.0, 0.0;
  lp.lo << -2.0, 0.0, 5.0;
  lp.hi << 7.0, 4.0, 5.0;
  KernelSolution sol = simplex_solve(lp, 1e-9);
  REQUIRE(sol.status == KernelStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(-2.0));
  CHECK(sol.x[1] == doctest::Approx(4.0));
  CHECK(sol.x[2] == doctest::Approx(5.0));
  CHECK(sol.objective == doctest::Approx(-6.0));
}

TEST_CASE("fixed variables never move") {
  LinearProgram lp = LinearProgram::make(2);
  lp.c << -5.0, 1.0;
  lp.lo << 0.5, 0.0;
  lp.hi << 0.5, 2.0;
  lp.C_in.resize(1, 2);
  lp.C_in << 1.0, 1.0;
  lp.g_in.resize(1);
  lp.g_in << 2.0;
  KernelSolution sol = simplex_solve(lp, 1e-9);
  REQUIRE(sol.status == KernelStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(0.5));
  CHECK(sol.x[1] == doctest::Approx(0.0));
}
