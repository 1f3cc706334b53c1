#pragma once

#include <Eigen/Core>

#include "logicut/oracle.hpp"

namespace logicut {

// Unit commitment with quadratic generation costs: commit generators per
// period (z, period-major: index t*n + i) and dispatch committed units to
// meet each period's demand,
//
//   min sum_t sum_i (1/2) a_i x_{i,t}^2 + b_i x_{i,t}
//   s.t. sum_i x_{i,t} >= D_t,  0 <= x_{i,t} <= cap_{i,t},
//
// where the coupling cap is min(u_i, M z_{i,t}) under big-M and u_i z_{i,t}
// under ridge (which also adds the perspective cost x^2/(2 gamma z)). Each
// period separates, so the dispatch is solved by bisection on the demand
// multiplier pi: x_i(pi) = clamp((pi - b_i)/curvature_i, 0, cap_i).
struct UnitCommitmentInstance {
  Eigen::VectorXd quad_cost;   // a_i > 0
  Eigen::VectorXd lin_cost;    // b_i
  Eigen::VectorXd max_output;  // u_i > 0
  Eigen::VectorXd demand;      // D_t >= 0 per period
};

class UnitCommitmentOracle final : public Oracle {
 public:
  UnitCommitmentOracle(UnitCommitmentInstance instance, Regularizer reg);

  int num_generators() const { return static_cast<int>(instance_.quad_cost.size()); }
  int num_periods() const { return static_cast<int>(instance_.demand.size()); }
  int num_binaries() const override { return num_generators() * num_periods(); }
  std::string family() const override { return "unitcommitment"; }
  const Regularizer& regularizer() const override { return reg_; }
  Regularizer natural_regularizer() const override {
    return Regularizer::big_m(instance_.max_output.maxCoeff());
  }

  SubproblemResult evaluate(const std::vector<int>& z) const override;
  SubproblemResult evaluate_fractional(const Eigen::VectorXd& z) const override;

  double step_scale() const override { return instance_.demand.sum() + 1.0; }

  const UnitCommitmentInstance& instance() const { return instance_; }

 private:
  SubproblemResult eval(const Eigen::VectorXd& z, bool binary) const;

  UnitCommitmentInstance instance_;
  Regularizer reg_;
};

}  // namespace logicut
