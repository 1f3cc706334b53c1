#pragma once

#include <vector>

#include <Eigen/Core>

#include "logicut/cut.hpp"
#include "logicut/feasible_set.hpp"
#include "logicut/oracle.hpp"

namespace logicut {

// Outcome of a continuous-relaxation solve: a lower bound on the binary
// optimum min over Z of c^T z + f(z), the fractional point that attains it
// (rounding seed), the dual at that point, and every cut generated on the
// way (all valid over Bool(Z), so the exact solver can reuse them).
struct RelaxationResult {
  double lower_bound = -kInf;
  Eigen::VectorXd z_frac;
  Eigen::VectorXd alpha;
  std::vector<Cut> cut_pool;
  int iterations = 0;
  bool converged = false;
};

// Cutting-plane descent on the relaxed master min c^T z + eta over
// Bool(Z) with eta >= each accumulated linearization of f. Each iteration
// solves the master LP, evaluates the oracle at its optimizer and adds the
// returned cut; stops when f(z_t) - eta_t <= tol. tol <= 0 selects the
// adaptive default 1e-6 * (1 + |f(z_t)|). If the cuts ever empty Bool(Z)
// the problem is infeasible: lower_bound = +inf, converged = true.
RelaxationResult kelley_solve(const Oracle& oracle, const FeasibleSet& feasible,
                              const Eigen::VectorXd& c, double tol = 0.0,
                              int max_iter = 500);

// Projected supergradient ascent on the concave dual
//   q(alpha) = h(alpha) + min over Bool(Z) of sum_i z_i (c_i - Omega*(alpha_i)),
// available when the oracle exposes the explicit h evaluation. Fixed step
// budget with diminishing steps s0 * scale / sqrt(t); returns the best q seen.
// Throws std::logic_error when the capability is missing.
RelaxationResult subgradient_ascent(const Oracle& oracle, const FeasibleSet& feasible,
                                    const Eigen::VectorXd& c, int steps = 5000,
                                    double step0 = 1.0);

}  // namespace logicut
