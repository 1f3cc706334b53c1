#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace logicut {

// The discrete set Z: a binary box l <= z <= u (l_i = 1 forces a coordinate
// on, u_i = 0 forbids it) plus an optional cardinality budget sum z_i <= k.
// Bool(Z) is the same polytope with the binary constraint relaxed to [0,1].
//
// Immutable after construction; the constructor rejects empty sets
// (l_i > u_i, or sum(l) > k, or k > sum(u) which would make the budget and
// box jointly unsatisfiable as an exact bound pair).
class FeasibleSet {
 public:
  // Free box in n dimensions, optional budget.
  explicit FeasibleSet(int n, std::optional<int> cardinality = std::nullopt);
  FeasibleSet(std::vector<int> lower, std::vector<int> upper,
              std::optional<int> cardinality = std::nullopt);

  int n() const { return n_; }
  const std::vector<int>& lower() const { return lower_; }
  const std::vector<int>& upper() const { return upper_; }
  std::optional<int> cardinality() const { return cardinality_; }

  bool contains(const std::vector<int>& z) const;

  // Membership of a fractional point in Bool(Z), within tol.
  bool contains_fractional(const Eigen::VectorXd& z, double tol = 1e-9) const;

  // Minimizes sum costs_i z_i over Bool(Z). The optimum of a linear function
  // over the box-plus-budget polytope is attained at a binary vertex: forced
  // coordinates at 1, then free negative-cost coordinates switched on in
  // increasing cost order until the budget binds. Ties break to the lower
  // index.
  struct LinearMinimum {
    std::vector<int> z;
    double value = 0.0;
  };
  LinearMinimum linear_minimize(const Eigen::VectorXd& costs) const;

  // Repairs a budget violation: switches free active coordinates off in
  // increasing priority order until sum z <= k. Requires the box to hold
  // already; never touches forced coordinates.
  std::vector<int> restore_feasibility(std::vector<int> z,
                                       const Eigen::VectorXd& priority) const;

 private:
  int n_;
  std::vector<int> lower_;
  std::vector<int> upper_;
  std::optional<int> cardinality_;
};

}  // namespace logicut
