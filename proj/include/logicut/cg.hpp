#pragma once

#include <functional>

#include <Eigen/Core>

namespace logicut {

struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  bool converged = false;  // false once 10 * dimension iterations are spent
};

// Conjugate gradients for S x = rhs with S symmetric positive definite,
// supplied as a matrix-vector product. Stops when the residual 2-norm drops
// below tol * ||rhs||_2 (absolute tol for a zero rhs).
CgResult cg_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& matvec,
                  const Eigen::VectorXd& rhs, double tol = 1e-10);

// Convenience overload for an explicit dense matrix.
CgResult cg_solve(const Eigen::MatrixXd& S, const Eigen::VectorXd& rhs, double tol = 1e-10);

}  // namespace logicut
