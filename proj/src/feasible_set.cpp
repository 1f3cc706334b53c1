#include "logicut/feasible_set.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace logicut {

FeasibleSet::FeasibleSet(int n, std::optional<int> cardinality)
    : FeasibleSet(std::vector<int>(n, 0), std::vector<int>(n, 1), cardinality) {}

FeasibleSet::FeasibleSet(std::vector<int> lower, std::vector<int> upper,
                         std::optional<int> cardinality)
    : n_(static_cast<int>(lower.size())),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      cardinality_(cardinality) {
  if (n_ <= 0) throw std::invalid_argument("FeasibleSet: dimension must be positive");
  if (upper_.size() != lower_.size())
    throw std::invalid_argument("FeasibleSet: lower/upper dimension mismatch");
  int sum_lower = 0;
  int sum_upper = 0;
  for (int i = 0; i < n_; ++i) {
    if (lower_[i] < 0 || lower_[i] > 1 || upper_[i] < 0 || upper_[i] > 1)
      throw std::invalid_argument("FeasibleSet: bounds must be binary");
    if (lower_[i] > upper_[i])
      throw std::invalid_argument("FeasibleSet: lower > upper at a coordinate");
    sum_lower += lower_[i];
    sum_upper += upper_[i];
  }
  if (cardinality_) {
    if (*cardinality_ < sum_lower)
      throw std::invalid_argument("FeasibleSet: cardinality below forced coordinates");
    if (*cardinality_ > sum_upper)
      throw std::invalid_argument("FeasibleSet: cardinality exceeds available coordinates");
  }
}

bool FeasibleSet::contains(const std::vector<int>& z) const {
  if (static_cast<int>(z.size()) != n_)
    throw std::invalid_argument("FeasibleSet::contains: dimension mismatch");
  int sum = 0;
  for (int i = 0; i < n_; ++i) {
    if (z[i] < lower_[i] || z[i] > upper_[i]) return false;
    sum += z[i];
  }
  return !cardinality_ || sum <= *cardinality_;
}

bool FeasibleSet::contains_fractional(const Eigen::VectorXd& z, double tol) const {
  if (static_cast<int>(z.size()) != n_)
    throw std::invalid_argument("FeasibleSet::contains_fractional: dimension mismatch");
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) {
    if (z[i] < lower_[i] - tol || z[i] > upper_[i] + tol) return false;
    sum += z[i];
  }
  return !cardinality_ || sum <= *cardinality_ + tol;
}

FeasibleSet::LinearMinimum FeasibleSet::linear_minimize(const Eigen::VectorXd& costs) const {
  if (static_cast<int>(costs.size()) != n_)
    throw std::invalid_argument("FeasibleSet::linear_minimize: dimension mismatch");
  LinearMinimum out;
  out.z.assign(n_, 0);
  int active = 0;
  for (int i = 0; i < n_; ++i)
    if (lower_[i] == 1) {
      out.z[i] = 1;
      out.value += costs[i];
      ++active;
    }
  std::vector<int> order;
  for (int i = 0; i < n_; ++i)
    if (lower_[i] == 0 && upper_[i] == 1 && costs[i] < 0.0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return costs[a] < costs[b]; });
  const int budget = cardinality_ ? *cardinality_ : n_;
  for (int i : order) {
    if (active >= budget) break;
    out.z[i] = 1;
    out.value += costs[i];
    ++active;
  }
  return out;
}

std::vector<int> FeasibleSet::restore_feasibility(std::vector<int> z,
                                                  const Eigen::VectorXd& priority) const {
  if (static_cast<int>(z.size()) != n_ || priority.size() != n_)
    throw std::invalid_argument("FeasibleSet::restore_feasibility: dimension mismatch");
  for (int i = 0; i < n_; ++i) z[i] = std::clamp(z[i], lower_[i], upper_[i]);
  if (!cardinality_) return z;
  int sum = std::accumulate(z.begin(), z.end(), 0);
  if (sum <= *cardinality_) return z;
  std::vector<int> droppable;
  for (int i = 0; i < n_; ++i)
    if (z[i] == 1 && lower_[i] == 0) droppable.push_back(i);
  std::stable_sort(droppable.begin(), droppable.end(),
                   [&](int a, int b) { return priority[a] < priority[b]; });
  for (int i : droppable) {
    if (sum <= *cardinality_) break;
    z[i] = 0;
    --sum;
  }
  return z;
}

}  // namespace logicut
