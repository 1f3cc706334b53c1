#include "logicut/oracle.hpp"

namespace logicut {

namespace {

Eigen::VectorXd as_vector(const std::vector<int>& z) {
  Eigen::VectorXd out(z.size());
  for (size_t i = 0; i < z.size(); ++i) out[static_cast<int>(i)] = z[i];
  return out;
}

}  // namespace

Cut make_exclusion_cut(const std::vector<int>& z) {
  Cut cut;
  cut.origin = CutOrigin::Feasibility;
  cut.coefficients.resize(z.size());
  double ones = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    cut.coefficients[static_cast<int>(i)] = z[i] == 1 ? -1.0 : 1.0;
    if (z[i] == 1) ones += 1.0;
  }
  cut.constant = 1.0 - ones;
  cut.generated_at = as_vector(z);
  return cut;
}

Cut make_monotone_cut(const std::vector<int>& z) {
  Cut cut;
  cut.origin = CutOrigin::Feasibility;
  cut.coefficients = Eigen::VectorXd::Zero(static_cast<int>(z.size()));
  for (size_t i = 0; i < z.size(); ++i) {
    if (z[i] == 0) cut.coefficients[static_cast<int>(i)] = 1.0;
  }
  cut.constant = 1.0;
  cut.generated_at = as_vector(z);
  return cut;
}

void Oracle::require_binary(const std::vector<int>& z, int n) {
  if (static_cast<int>(z.size()) != n)
    throw std::invalid_argument("oracle: z has wrong dimension");
  for (int v : z) {
    if (v != 0 && v != 1) throw std::invalid_argument("oracle: z must be binary");
  }
}

void Oracle::require_unit_box(const Eigen::VectorXd& z, int n) {
  if (static_cast<int>(z.size()) != n)
    throw std::invalid_argument("oracle: z has wrong dimension");
  for (int i = 0; i < n; ++i) {
    if (z[i] < -1e-9 || z[i] > 1.0 + 1e-9)
      throw std::invalid_argument("oracle: z outside the unit box");
  }
}

Eigen::VectorXd Oracle::to_vector(const std::vector<int>& z) {
  Eigen::VectorXd out(z.size());
  for (size_t i = 0; i < z.size(); ++i) out[static_cast<int>(i)] = z[i];
  return out;
}

}  // namespace logicut
