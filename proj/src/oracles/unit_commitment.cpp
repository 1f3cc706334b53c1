#include "logicut/oracles/unit_commitment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace logicut {

namespace {
constexpr double kOpenTol = 1e-9;
constexpr double kDispatchTol = 1e-10;  // on sum x - D at the bisection root
}

UnitCommitmentOracle::UnitCommitmentOracle(UnitCommitmentInstance instance, Regularizer reg)
    : instance_(std::move(instance)), reg_(reg) {
  const int n = num_generators();
  const int T = num_periods();
  if (n <= 0) throw std::invalid_argument("unitcommitment: no generators");
  if (T <= 0) throw std::invalid_argument("unitcommitment: no periods");
  if (instance_.lin_cost.size() != n || instance_.max_output.size() != n)
    throw std::invalid_argument("unitcommitment: generator data dimension mismatch");
  for (int i = 0; i < n; ++i) {
    if (!(instance_.quad_cost[i] > 0.0))
      throw std::invalid_argument("unitcommitment: quadratic costs must be positive");
    if (!(instance_.max_output[i] > 0.0))
      throw std::invalid_argument("unitcommitment: output limits must be positive");
  }
  for (int t = 0; t < T; ++t) {
    if (instance_.demand[t] < 0.0)
      throw std::invalid_argument("unitcommitment: demands must be nonnegative");
    if (instance_.demand[t] > instance_.max_output.sum() + 1e-9)
      throw std::invalid_argument("unitcommitment: demand exceeds total output limit");
  }
}

SubproblemResult UnitCommitmentOracle::evaluate(const std::vector<int>& z) const {
  require_binary(z, num_binaries());
  return eval(to_vector(z), true);
}

SubproblemResult UnitCommitmentOracle::evaluate_fractional(const Eigen::VectorXd& z) const {
  require_unit_box(z, num_binaries());
  bool binary = true;
  for (int i = 0; i < z.size(); ++i)
    if (z[i] > kOpenTol && z[i] < 1.0 - kOpenTol) binary = false;
  return eval(z, binary);
}

SubproblemResult UnitCommitmentOracle::eval(const Eigen::VectorXd& z, bool binary) const {
  const int n = num_generators();
  const int T = num_periods();
  const double M = reg_.is_big_m() ? reg_.M() : 0.0;

  SubproblemResult res;
  res.x_star = Eigen::VectorXd::Zero(n * T);
  res.alpha_star = Eigen::VectorXd::Zero(n * T);

  Eigen::VectorXd cap(n), curv(n);
  double f = 0.0;

  for (int t = 0; t < T; ++t) {
    const double D = instance_.demand[t];
    double cap_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double zti = z[t * n + i];
      if (zti <= kOpenTol) {
        cap[i] = 0.0;
        curv[i] = instance_.quad_cost[i];
      } else if (reg_.is_big_m()) {
        cap[i] = std::min(instance_.max_output[i], M * zti);
        curv[i] = instance_.quad_cost[i];
      } else {
        cap[i] = instance_.max_output[i] * zti;
        curv[i] = instance_.quad_cost[i] + 1.0 / (reg_.gamma() * zti);
      }
      cap_sum += cap[i];
    }

    if (cap_sum < D - 1e-9) {
      res.status = SubproblemStatus::Infeasible;
      res.infeasibility_cut_kind = InfeasibilityCutKind::Monotone;
      if (binary) {
        std::vector<int> zi(n * T);
        for (int k = 0; k < n * T; ++k) zi[k] = z[k] > 0.5 ? 1 : 0;
        res.cut = make_monotone_cut(zi);
        res.cut.generated_at = z;
      } else {
        // Linear capacity bound for the violated period: every feasible z'
        // provides at least D_t of cap there. Big-M caps are concave in z, so
        // the supergradient of sum_i min(u_i, M z) overestimates any z'.
        res.cut.origin = CutOrigin::Feasibility;
        res.cut.coefficients = Eigen::VectorXd::Zero(n * T);
        double lhs_at_z = 0.0;
        for (int i = 0; i < n; ++i) {
          const double zti = z[t * n + i];
          double g;
          if (reg_.is_big_m())
            g = M * zti <= instance_.max_output[i] ? M : 0.0;
          else
            g = instance_.max_output[i];
          res.cut.coefficients[t * n + i] = g;
          lhs_at_z += g * zti;
        }
        res.cut.constant = reg_.is_big_m() ? D - cap_sum + lhs_at_z : D;
        res.cut.generated_at = z;
      }
      return res;
    }

    // Bisection for the demand multiplier on the pinned bracket; the ridge
    // curvature can push the root above it, so the top expands on demand.
    const auto dispatch = [&](double pi, Eigen::VectorXd* x) -> double {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v =
            std::clamp((pi - instance_.lin_cost[i]) / curv[i], 0.0, cap[i]);
        if (x) (*x)[i] = v;
        total += v;
      }
      return total;
    };
    double lo = instance_.lin_cost.minCoeff();
    double hi = lo;
    for (int i = 0; i < n; ++i)
      hi = std::max(hi, instance_.lin_cost[i] +
                            instance_.quad_cost[i] * instance_.max_output[i]);
    for (int grow = 0; grow < 200 && dispatch(hi, nullptr) < D - kDispatchTol; ++grow)
      hi = 2.0 * hi - lo + 1.0;
    double pi = hi;
    if (dispatch(lo, nullptr) >= D - kDispatchTol) {
      pi = lo;
    } else {
      for (int it = 0; it < 200; ++it) {
        pi = 0.5 * (lo + hi);
        const double total = dispatch(pi, nullptr);
        if (std::abs(total - D) <= kDispatchTol) break;
        (total < D ? lo : hi) = pi;
      }
    }
    // Demand is an inequality: a negative root means the unconstrained
    // dispatch already overshoots D, and the multiplier is zero.
    pi = std::max(0.0, pi);

    Eigen::VectorXd x(n);
    dispatch(pi, &x);
    for (int i = 0; i < n; ++i) {
      const double zti = z[t * n + i];
      const int k = t * n + i;
      res.x_star[k] = x[i];
      f += 0.5 * instance_.quad_cost[i] * x[i] * x[i] + instance_.lin_cost[i] * x[i];
      if (zti <= kOpenTol) {
        res.alpha_star[k] = std::min(instance_.lin_cost[i] - pi, 0.0);
      } else if (reg_.is_ridge()) {
        f += x[i] * x[i] / (2.0 * reg_.gamma() * zti);
        res.alpha_star[k] = x[i] / (reg_.gamma() * zti);
      } else if (M * zti < instance_.max_output[i]) {
        // Cap came from the coupling box; its multiplier is the margin of the
        // marginal price over the generator's own marginal cost at the cap.
        res.alpha_star[k] =
            -std::max(0.0, pi - instance_.lin_cost[i] - instance_.quad_cost[i] * cap[i]);
      } else {
        res.alpha_star[k] = 0.0;  // the physical limit u_i binds, not the box
      }
    }
  }

  res.status = SubproblemStatus::Feasible;
  res.f_value = f;
  res.cut.origin = CutOrigin::Optimality;
  res.cut.coefficients.resize(n * T);
  for (int k = 0; k < n * T; ++k)
    res.cut.coefficients[k] = -reg_.conjugate(res.alpha_star[k]);
  res.cut.constant = res.f_value - res.cut.coefficients.dot(z);
  res.cut.generated_at = z;
  return res;
}

}  // namespace logicut
