#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace logicut {

enum class CutOrigin { Optimality, Feasibility };

// How an infeasible point is cut off:
//   Exclusion  removes exactly the generating binary point,
//   Monotone   removes the generating point and everything below it
//              (usable only when feasibility is monotone in z).
enum class InfeasibilityCutKind { Exclusion, Monotone };

// A linear cut in z. Interpretation depends on origin:
//   Optimality:   eta >= constant + coefficients^T z   (epigraph cut)
//   Feasibility:  coefficients^T z >= constant         (removes infeasible z)
struct Cut {
  CutOrigin origin = CutOrigin::Optimality;
  double constant = 0.0;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd generated_at;

  // Optimality cuts: the predicted lower estimate of f at z.
  double value_at(const Eigen::VectorXd& z) const { return constant + coefficients.dot(z); }
  // Feasibility cuts: whether z satisfies the cut.
  bool admits(const Eigen::VectorXd& z, double tol = 1e-9) const {
    return coefficients.dot(z) >= constant - tol;
  }
};

// Feasibility cut that removes exactly the binary point z:
//   sum_{i: z_i=0} z'_i + sum_{i: z_i=1} (1 - z'_i) >= 1.
Cut make_exclusion_cut(const std::vector<int>& z);

// Feasibility cut that removes z and every z' <= z (monotone infeasibility):
//   sum_{i: z_i=0} z'_i >= 1.
Cut make_monotone_cut(const std::vector<int>& z);

enum class SubproblemStatus { Feasible, Infeasible };

// Outcome of one inner minimization at a fixed z: the value f(z), the primal
// witness, the dual vector the cut was assembled from, and the cut itself
// (an epigraph cut when feasible, a feasibility cut otherwise).
struct SubproblemResult {
  SubproblemStatus status = SubproblemStatus::Feasible;
  double f_value = 0.0;  // +inf when infeasible
  Eigen::VectorXd x_star;
  Eigen::VectorXd alpha_star;
  Cut cut;
  std::optional<InfeasibilityCutKind> infeasibility_cut_kind;
};

}  // namespace logicut
