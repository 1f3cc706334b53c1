#pragma once

#include <vector>

#include <Eigen/Core>

#include "logicut/regularizer.hpp"  // kInf

namespace logicut {

// Dense LP in the form
//
//   min  c^T x
//   s.t. A_eq x  = b_eq
//        C_in x <= g_in
//        lo <= x <= hi   (+-inf entries allowed)
//
// Desk-scale carrier: all matrices dense, no presolve, no scaling.
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd C_in;
  Eigen::VectorXd g_in;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  static LinearProgram make(int nvars);
  int num_vars() const { return static_cast<int>(c.size()); }
  int num_eq() const { return static_cast<int>(b_eq.size()); }
  int num_ineq() const { return static_cast<int>(g_in.size()); }
};

enum class KernelStatus { Optimal, Infeasible, Unbounded, IterationLimit };

// Per-column simplex status, exposed for warm starts. Columns are ordered
// structurals first, then one slack per inequality row (row order).
enum class VarStatus : unsigned char { AtLower, AtUpper, Basic, FreeNonbasic };

// Solution of an LP or QP kernel. Dual conventions (minimization):
//
//   stationarity     grad_j = eq_duals^T A_j - ineq_duals^T C_j + reduced_costs_j
//                    with grad = c (LP) or Qx + d (QP),
//   ineq_duals >= 0  for rows C x <= g,
//   reduced_costs    >= 0 at lower bound, <= 0 at upper bound, 0 basic;
//   bound_duals_j    = |reduced_costs_j| of an active bound (0 otherwise),
//   dual objective   = b^T eq_duals - g^T ineq_duals + sum_j reduced_costs_j x_j.
//
// certificate: Infeasible -> Farkas row multipliers pi (eq rows then ineq
// rows; pi^T rhs exceeds the max of pi^T A x over the box); Unbounded ->
// a primal ray over the structural variables.
struct KernelSolution {
  KernelStatus status = KernelStatus::IterationLimit;
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd eq_duals;
  Eigen::VectorXd ineq_duals;
  Eigen::VectorXd reduced_costs;
  Eigen::VectorXd bound_duals;
  Eigen::VectorXd certificate;
  std::vector<VarStatus> var_status;
  int iterations = 0;
};

struct SimplexOptions {
  double tol = 1e-9;    // pricing / optimality tolerance
  int max_pivots = -1;  // default 50 * (rows + cols)
  // Warm start: statuses from a previous solve of a related LP (same
  // structural columns; inequality rows may have been appended). Ignored if
  // it cannot be turned into a valid basis.
  const std::vector<VarStatus>* warm_start = nullptr;
};

// Two-phase bounded-variable primal simplex. Dantzig pricing with a
// smallest-index tie-break, switching to Bland's rule for the remainder of the
// solve once 2*(rows+cols) degenerate pivots have accumulated. Phase-1
// optimum above 1e-7 reports Infeasible with the phase-1 duals as certificate.
KernelSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& opts = {});
KernelSolution simplex_solve(const LinearProgram& lp, double tol);

}  // namespace logicut
