#pragma once

#include <Eigen/Core>

#include "logicut/lp.hpp"

namespace logicut {

// Dense convex QP in the form
//
//   min  0.5 x^T Q x + d^T x
//   s.t. A_eq x  = b_eq
//        C_in x <= g_in
//        lo <= x <= hi
//
// with Q symmetric positive semidefinite.
struct QuadraticProgram {
  Eigen::MatrixXd Q;
  Eigen::VectorXd d;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd C_in;
  Eigen::VectorXd g_in;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  static QuadraticProgram make(int nvars);
  int num_vars() const { return static_cast<int>(d.size()); }
  int num_eq() const { return static_cast<int>(b_eq.size()); }
  int num_ineq() const { return static_cast<int>(g_in.size()); }
};

// Operator-splitting solver (scaled ADMM with over-relaxation and adaptive
// penalty) followed by an active-set polish that solves the KKT system of the
// constraints the iterates identified as tight. Residual targets:
//
//   || [A_eq; C_in; I] x - projection ||_inf <= tol   (primal)
//   || Q x + d + A_eq^T (-eq_duals) + C_in^T ineq_duals - reduced_costs ||_inf <= tol
//
// Dual conventions match KernelSolution (see lp.hpp): the stationarity
// identity, ineq_duals >= 0, and signed reduced_costs for the box all carry
// over with grad = Q x + d in place of c.
//
// Infeasible primal problems are detected from the divergence certificate of
// the dual iterates (returned in `certificate`, ordered eq rows, ineq rows,
// box rows); unbounded ones from the primal iterates.
KernelSolution qp_solve(const QuadraticProgram& qp, double tol = 1e-8, int max_iter = 200000);

}  // namespace logicut
