#pragma once

#include <Eigen/Core>

#include "logicut/oracle.hpp"

namespace logicut {

// Sparse empirical risk minimization: choose a feature subset (z) and weights
// w supported on it, minimizing
//
//   sum_i loss(y_i, x_i^T w) + regularization on w,
//
// with squared loss (OLS) or hinge loss (SVM, labels +-1). Ridge uses the
// weighted penalty ||w||^2 / (2*gamma); big-M uses the box |w_j| <= M z_j.
struct ErmInstance {
  enum class Loss { OLS, SVM };
  Eigen::MatrixXd X;  // samples x features
  Eigen::VectorXd y;  // responses (or +-1 labels)
  Loss loss = Loss::OLS;
};

class ErmOracle final : public Oracle {
 public:
  ErmOracle(ErmInstance instance, Regularizer reg);

  int num_binaries() const override { return static_cast<int>(instance_.X.cols()); }
  std::string family() const override { return "erm"; }
  const Regularizer& regularizer() const override { return reg_; }
  Regularizer natural_regularizer() const override { return Regularizer::ridge(1.0); }

  SubproblemResult evaluate(const std::vector<int>& z) const override;
  SubproblemResult evaluate_fractional(const Eigen::VectorXd& z) const override;

  // h over the feature-space dual (one coordinate per feature); available for
  // OLS with full-rank X^T X only.
  bool has_h_oracle() const override { return h_supported_; }
  HEval h_eval(const Eigen::VectorXd& alpha) const override;
  double step_scale() const override { return instance_.y.norm(); }

  const ErmInstance& instance() const { return instance_; }

 private:
  SubproblemResult eval_ridge_ols(const Eigen::VectorXd& z) const;
  SubproblemResult eval_ridge_svm(const Eigen::VectorXd& z) const;
  SubproblemResult eval_bigm(const Eigen::VectorXd& z) const;

  ErmInstance instance_;
  Regularizer reg_;
  bool h_supported_ = false;
  Eigen::MatrixXd xtx_;  // cached X^T X for the h oracle
};

}  // namespace logicut
