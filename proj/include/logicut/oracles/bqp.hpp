#pragma once

#include <Eigen/Core>

#include "logicut/oracle.hpp"

namespace logicut {

// Unconstrained binary quadratic program min (or max) z^T Q z over binary z.
// Here x and z coincide, so the subproblem has no inner minimization: f(z) is
// the linearized product form
//
//   f(z) = sum_i Q_ii z_i + sum_{i<j} 2 Q_ij y_ij,
//   y_ij = max(0, z_i + z_j - 1) when the product cost is positive,
//   y_ij = min(z_i, z_j)         when it is negative,
//
// which is convex and piecewise linear on the unit box and agrees with
// z^T Q z at binary points. Cut coefficients are the closed-form duals of the
// product constraints: each active term charges its tight side, ties broken
// toward the lower-indexed variable. Maximization is negated internally; all
// reported values are in minimization sense.
struct BqpInstance {
  Eigen::MatrixXd Q;  // symmetric
  bool maximize = false;
};

class BqpOracle final : public Oracle {
 public:
  // The coupling is the unit box itself, so the regularizer must be big-M
  // with M = 1.
  BqpOracle(BqpInstance instance, Regularizer reg);

  int num_binaries() const override { return static_cast<int>(instance_.Q.rows()); }
  std::string family() const override { return "bqp"; }
  const Regularizer& regularizer() const override { return reg_; }
  Regularizer natural_regularizer() const override { return Regularizer::big_m(1.0); }

  SubproblemResult evaluate(const std::vector<int>& z) const override;
  SubproblemResult evaluate_fractional(const Eigen::VectorXd& z) const override;

  double step_scale() const override { return instance_.Q.cwiseAbs().maxCoeff() + 1.0; }

  const BqpInstance& instance() const { return instance_; }

 private:
  SubproblemResult eval(const Eigen::VectorXd& z) const;

  BqpInstance instance_;
  Regularizer reg_;
  Eigen::MatrixXd q_min_;  // Q negated when maximizing
};

}  // namespace logicut
