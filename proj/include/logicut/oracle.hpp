#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "logicut/cut.hpp"
#include "logicut/regularizer.hpp"

namespace logicut {

// Inner-minimization oracle for one problem family. An oracle owns its
// instance data and regularizer; evaluations are const and reentrant.
//
// Contract:
//  - evaluate(z) for binary z returns f(z) = min_x g(x) + regularization,
//    subject to "x coordinates coupled to z_i vanish when z_i = 0", plus an
//    epigraph cut that is tight at z and valid at every binary z' in the box.
//  - evaluate_fractional(z) extends f to the unit box (perspective form for
//    ridge, scaled capacities for big-M) and agrees with evaluate on binary z.
//  - Cuts returned for infeasible z are feasibility cuts (see cut.hpp).
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual int num_binaries() const = 0;
  virtual std::string family() const = 0;
  virtual const Regularizer& regularizer() const = 0;

  // The regularizer the family is naturally posed with (ridge for penalized
  // fitting problems, big-M where the instance carries its own variable
  // bounds). Parameters are instance-derived where the family defines them.
  virtual Regularizer natural_regularizer() const = 0;

  virtual SubproblemResult evaluate(const std::vector<int>& z) const = 0;
  virtual SubproblemResult evaluate_fractional(const Eigen::VectorXd& z) const = 0;

  // Optional capability: h(alpha) = inf_v g(v) - v^T alpha together with an
  // attaining v* (-v* is a supergradient of h). Needed by the subgradient
  // relaxation; families without a tractable h report unsupported.
  struct HEval {
    double value = 0.0;
    Eigen::VectorXd minimizer;
  };
  virtual bool has_h_oracle() const { return false; }
  virtual HEval h_eval(const Eigen::VectorXd& alpha) const {
    (void)alpha;
    throw std::logic_error(family() + ": h oracle not supported");
  }
  // Magnitude hint for subgradient step sizes (problem scale).
  virtual double step_scale() const { return 1.0; }

 protected:
  // Shared validation helpers for implementations.
  static void require_binary(const std::vector<int>& z, int n);
  static void require_unit_box(const Eigen::VectorXd& z, int n);
  static Eigen::VectorXd to_vector(const std::vector<int>& z);
};

}  // namespace logicut
