#include "logicut/oracles/bqp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace logicut {

BqpOracle::BqpOracle(BqpInstance instance, Regularizer reg)
    : instance_(std::move(instance)), reg_(reg) {
  const int n = static_cast<int>(instance_.Q.rows());
  if (n <= 0 || instance_.Q.cols() != n)
    throw std::invalid_argument("bqp: Q must be square and nonempty");
  if ((instance_.Q - instance_.Q.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("bqp: Q must be symmetric");
  if (!reg_.is_big_m() || std::abs(reg_.M() - 1.0) > 1e-12)
    throw std::invalid_argument("bqp: requires the big-M regularizer with M = 1");
  q_min_ = instance_.maximize ? (-instance_.Q).eval() : instance_.Q;
}

SubproblemResult BqpOracle::evaluate(const std::vector<int>& z) const {
  require_binary(z, num_binaries());
  return eval(to_vector(z));
}

SubproblemResult BqpOracle::evaluate_fractional(const Eigen::VectorXd& z) const {
  require_unit_box(z, num_binaries());
  return eval(z);
}

SubproblemResult BqpOracle::eval(const Eigen::VectorXd& z) const {
  const int n = num_binaries();

  double f = 0.0;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    f += q_min_(i, i) * z[i];
    g[i] += q_min_(i, i);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = 2.0 * q_min_(i, j);
      if (w == 0.0) continue;
      if (w > 0.0) {
        // y = max(0, z_i + z_j - 1); both variables carry the charge when the
        // product side is active, nobody at the kink or below.
        const double y = z[i] + z[j] - 1.0;
        if (y > 0.0) {
          f += w * y;
          g[i] += w;
          g[j] += w;
        }
      } else {
        // y = min(z_i, z_j); the smaller coordinate is the tight side and
        // takes the charge, ties toward the lower index.
        if (z[i] <= z[j]) {
          f += w * z[i];
          g[i] += w;
        } else {
          f += w * z[j];
          g[j] += w;
        }
      }
    }
  }

  SubproblemResult res;
  res.status = SubproblemStatus::Feasible;
  res.f_value = f;
  res.x_star = z;
  res.alpha_star = g;  // the closed-form product-constraint charges
  res.cut.origin = CutOrigin::Optimality;
  res.cut.coefficients = g;
  res.cut.constant = f - g.dot(z);
  res.cut.generated_at = z;
  return res;
}

}  // namespace logicut
