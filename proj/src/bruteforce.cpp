#include "logicut/bruteforce.hpp"

#include <cstdint>
#include <string>

namespace logicut {

EnumerationResult enumerate(const Oracle& oracle, const FeasibleSet& feasible,
                            const Eigen::VectorXd& c, bool retain_table) {
  const int n = feasible.n();
  if (n > 24)
    throw DimensionTooLarge("enumerate: " + std::to_string(n) +
                            " binaries exceed the 2^24 enumeration ceiling");
  if (c.size() != n || oracle.num_binaries() != n)
    throw std::invalid_argument("enumerate: dimension mismatch");

  EnumerationResult result;
  if (retain_table) result.table.emplace();

  std::vector<int> z(n);
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    // mask ascending visits z in lexicographic order with z_1 most
    // significant.
    for (int i = 0; i < n; ++i) z[i] = static_cast<int>((mask >> (n - 1 - i)) & 1u);
    if (!feasible.contains(z)) continue;

    SubproblemResult sub = oracle.evaluate(z);
    double value = kInf;
    if (sub.status == SubproblemStatus::Feasible) {
      value = sub.f_value;
      for (int i = 0; i < n; ++i) value += c[i] * z[i];
    } else {
      ++result.infeasible_count;
    }
    if (retain_table) result.table->emplace_back(z, value);
    if (value < result.best_value) {
      result.best_value = value;
      result.best_z = z;
    }
  }
  return result;
}

}  // namespace logicut
