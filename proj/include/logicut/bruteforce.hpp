#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "logicut/feasible_set.hpp"
#include "logicut/oracle.hpp"

namespace logicut {

// Raised when an enumeration request exceeds the 2^24 subproblem ceiling.
class DimensionTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Ground truth from exhaustive enumeration. best_value = +inf and best_z
// empty when every member of Z is oracle-infeasible. When retained, table
// lists every member of Z in visit order with its objective (+inf entries
// for oracle-infeasible points).
struct EnumerationResult {
  std::vector<int> best_z;
  double best_value = kInf;
  std::optional<std::vector<std::pair<std::vector<int>, double>>> table;
  int infeasible_count = 0;
};

// Evaluates c^T z + f(z) at every binary z in Z in lexicographic order
// (z_1 most significant) with no pruning of any kind; ties keep the
// lexicographically smallest minimizer. Throws DimensionTooLarge when
// n > 24.
EnumerationResult enumerate(const Oracle& oracle, const FeasibleSet& feasible,
                            const Eigen::VectorXd& c, bool retain_table = false);

}  // namespace logicut
