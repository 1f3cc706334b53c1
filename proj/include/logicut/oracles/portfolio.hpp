#pragma once

#include <Eigen/Core>

#include "logicut/oracle.hpp"

namespace logicut {

// Sparse portfolio selection: pick a support of assets (z) and a long-only
// allocation x on it summing to one, minimizing
//
//   (sigma/2) x^T Sigma x - mu^T x + regularization on x.
//
// Optional linear side constraints row_lower <= A x <= row_upper are passed
// through to the QP kernel untouched.
struct PortfolioInstance {
  Eigen::VectorXd mu;      // expected returns
  Eigen::MatrixXd Sigma;   // covariance, PSD
  double risk_aversion = 1.0;

  Eigen::MatrixXd A;       // side-constraint rows (may be empty)
  Eigen::VectorXd row_lower;
  Eigen::VectorXd row_upper;
};

class PortfolioOracle final : public Oracle {
 public:
  PortfolioOracle(PortfolioInstance instance, Regularizer reg);

  int num_binaries() const override { return static_cast<int>(instance_.mu.size()); }
  std::string family() const override { return "portfolio"; }
  const Regularizer& regularizer() const override { return reg_; }
  Regularizer natural_regularizer() const override { return Regularizer::ridge(1.0); }

  SubproblemResult evaluate(const std::vector<int>& z) const override;
  SubproblemResult evaluate_fractional(const Eigen::VectorXd& z) const override;

  double step_scale() const override;

  const PortfolioInstance& instance() const { return instance_; }

 private:
  SubproblemResult eval(const Eigen::VectorXd& z) const;

  PortfolioInstance instance_;
  Regularizer reg_;
};

}  // namespace logicut
