#pragma once

#include <Eigen/Core>

#include "logicut/oracle.hpp"

namespace logicut {

// Capacitated facility location: open a subset of facilities (z) and ship to
// customers, minimizing transport cost
//
//   sum_ij c_ij x_ij   s.t.  sum_i x_ij = d_j,  sum_j x_ij <= u_i,  x >= 0,
//
// with shipments from closed facilities forced to zero. The per-arc coupling
// bound is x_ij <= min(u_i, d_j) * z_i (the instance's own big-M); ridge adds
// the quadratic shipment penalty instead. Fixed opening costs belong to the
// master objective c^T z, not to f(z).
struct FacilityInstance {
  Eigen::VectorXd open_cost;   // per facility, consumed by the master problem
  Eigen::MatrixXd transport;   // c_ij, facilities x customers
  Eigen::VectorXd capacity;    // u_i > 0
  Eigen::VectorXd demand;      // d_j >= 0
};

class FacilityOracle final : public Oracle {
 public:
  FacilityOracle(FacilityInstance instance, Regularizer reg);

  int num_binaries() const override { return static_cast<int>(instance_.capacity.size()); }
  std::string family() const override { return "facility"; }
  const Regularizer& regularizer() const override { return reg_; }
  Regularizer natural_regularizer() const override;

  SubproblemResult evaluate(const std::vector<int>& z) const override;
  SubproblemResult evaluate_fractional(const Eigen::VectorXd& z) const override;

  double step_scale() const override { return instance_.demand.sum() + 1.0; }

  const FacilityInstance& instance() const { return instance_; }

 private:
  SubproblemResult eval(const Eigen::VectorXd& z, bool binary) const;
  SubproblemResult infeasible_capacity(const Eigen::VectorXd& z, bool binary) const;

  // Joint capacity of the open network under the scaled arc caps; fills the
  // min-cut capacity inequality when routing falls short of total demand.
  bool routable(const Eigen::VectorXd& z, Cut* cut_if_not) const;

  double cap(int i, int j) const {
    return std::min(instance_.capacity[i], instance_.demand[j]);
  }

  FacilityInstance instance_;
  Regularizer reg_;
};

}  // namespace logicut
