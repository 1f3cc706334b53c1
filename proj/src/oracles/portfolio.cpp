#include "logicut/oracles/portfolio.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "logicut/qp.hpp"

namespace logicut {

namespace {
// The ridge perspective diagonal 1/(gamma z) is kept conditioned by treating
// near-zero coordinates as closed; big-M caps scale harmlessly to zero.
constexpr double kOpenTol = 1e-9;
constexpr double kRidgeOpenTol = 1e-7;
}

PortfolioOracle::PortfolioOracle(PortfolioInstance instance, Regularizer reg)
    : instance_(std::move(instance)), reg_(reg) {
  const int n = static_cast<int>(instance_.mu.size());
  if (n <= 0) throw std::invalid_argument("portfolio: empty instance");
  if (instance_.Sigma.rows() != n || instance_.Sigma.cols() != n)
    throw std::invalid_argument("portfolio: Sigma dimension mismatch");
  if ((instance_.Sigma - instance_.Sigma.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("portfolio: Sigma must be symmetric");
  if (instance_.risk_aversion < 0.0)
    throw std::invalid_argument("portfolio: risk aversion must be >= 0");
  const int rows = static_cast<int>(instance_.A.rows());
  if (rows > 0 && instance_.A.cols() != n)
    throw std::invalid_argument("portfolio: side-constraint columns mismatch");
  if (instance_.row_lower.size() != rows || instance_.row_upper.size() != rows)
    throw std::invalid_argument("portfolio: side-constraint bounds mismatch");
  for (int r = 0; r < rows; ++r) {
    if (instance_.row_lower[r] > instance_.row_upper[r])
      throw std::invalid_argument("portfolio: side-constraint bounds crossed");
  }
}

double PortfolioOracle::step_scale() const { return instance_.mu.norm() + 1.0; }

SubproblemResult PortfolioOracle::evaluate(const std::vector<int>& z) const {
  require_binary(z, num_binaries());
  return eval(to_vector(z));
}

SubproblemResult PortfolioOracle::evaluate_fractional(const Eigen::VectorXd& z) const {
  require_unit_box(z, num_binaries());
  return eval(z);
}

SubproblemResult PortfolioOracle::eval(const Eigen::VectorXd& z) const {
  const int n = num_binaries();
  const double open_tol = reg_.is_ridge() ? kRidgeOpenTol : kOpenTol;
  std::vector<int> support;
  for (int i = 0; i < n; ++i)
    if (z[i] > open_tol) support.push_back(i);

  SubproblemResult res;
  res.x_star = Eigen::VectorXd::Zero(n);
  res.alpha_star = Eigen::VectorXd::Zero(n);

  if (support.empty()) {
    // The budget constraint e^T x = 1 is unattainable with every asset closed.
    res.status = SubproblemStatus::Infeasible;
    res.infeasibility_cut_kind = InfeasibilityCutKind::Exclusion;
    res.cut.origin = CutOrigin::Feasibility;
    res.cut.coefficients = Eigen::VectorXd::Ones(n);
    res.cut.constant = 1.0;
    res.cut.generated_at = z;
    return res;
  }

  if (reg_.is_big_m()) {
    // Capacity test: e^T x = 1 needs sum_i min(1, M z_i) >= 1. Every feasible
    // z' satisfies M sum z'_i >= 1, which separates the current point because
    // all caps are below one whenever the test fails.
    double cap_sum = 0.0;
    for (int i : support) cap_sum += std::min(1.0, reg_.M() * z[i]);
    if (cap_sum < 1.0 - 1e-12) {
      res.status = SubproblemStatus::Infeasible;
      res.infeasibility_cut_kind = InfeasibilityCutKind::Monotone;
      res.cut.origin = CutOrigin::Feasibility;
      res.cut.coefficients = Eigen::VectorXd::Constant(n, reg_.M());
      res.cut.constant = 1.0;
      res.cut.generated_at = z;
      return res;
    }
  }

  const int s = static_cast<int>(support.size());
  const int side_rows = static_cast<int>(instance_.A.rows());

  QuadraticProgram qp = QuadraticProgram::make(s);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b)
      qp.Q(a, b) = instance_.risk_aversion * instance_.Sigma(support[a], support[b]);
  for (int a = 0; a < s; ++a) {
    qp.d[a] = -instance_.mu[support[a]];
    qp.lo[a] = 0.0;
    if (reg_.is_ridge())
      qp.Q(a, a) += 1.0 / (reg_.gamma() * z[support[a]]);
    else
      qp.hi[a] = reg_.M() * z[support[a]];
  }
  qp.A_eq = Eigen::MatrixXd::Ones(1, s);
  qp.b_eq = Eigen::VectorXd::Ones(1);

  // Two-sided side rows become up to two one-sided kernel rows each.
  std::vector<int> upper_of(side_rows, -1), lower_of(side_rows, -1);
  {
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    for (int r = 0; r < side_rows; ++r) {
      Eigen::VectorXd row(s);
      for (int a = 0; a < s; ++a) row[a] = instance_.A(r, support[a]);
      if (instance_.row_upper[r] < kInf) {
        upper_of[r] = static_cast<int>(rows.size());
        rows.push_back(row);
        rhs.push_back(instance_.row_upper[r]);
      }
      if (instance_.row_lower[r] > -kInf) {
        lower_of[r] = static_cast<int>(rows.size());
        rows.push_back(-row);
        rhs.push_back(-instance_.row_lower[r]);
      }
    }
    qp.C_in.resize(static_cast<int>(rows.size()), s);
    qp.g_in.resize(static_cast<int>(rows.size()));
    for (size_t k = 0; k < rows.size(); ++k) {
      qp.C_in.row(static_cast<int>(k)) = rows[k].transpose();
      qp.g_in[static_cast<int>(k)] = rhs[k];
    }
  }

  KernelSolution sol = qp_solve(qp, 1e-9);
  if (sol.status == KernelStatus::Infeasible) {
    // Only reachable through side constraints; the budget row alone was
    // screened above. At a binary point the general exclusion cut applies.
    bool binary = true;
    for (int i = 0; i < n; ++i)
      if (z[i] > kOpenTol && z[i] < 1.0 - kOpenTol) binary = false;
    if (!binary)
      throw std::runtime_error("portfolio: side constraints infeasible at fractional z");
    std::vector<int> zi(n);
    for (int i = 0; i < n; ++i) zi[i] = z[i] > 0.5 ? 1 : 0;
    res.status = SubproblemStatus::Infeasible;
    res.infeasibility_cut_kind = InfeasibilityCutKind::Exclusion;
    res.cut = make_exclusion_cut(zi);
    return res;
  }
  if (sol.status != KernelStatus::Optimal)
    throw std::runtime_error("portfolio: QP kernel did not converge");

  res.status = SubproblemStatus::Feasible;
  res.f_value = sol.objective;
  for (int a = 0; a < s; ++a) res.x_star[support[a]] = sol.x[a];

  // Net side-row duals in the stationarity convention of the kernel:
  // rc_j = grad_j - nu + sum_r lambda_r C_rj.
  const double nu = sol.eq_duals[0];
  Eigen::VectorXd lambda_net = Eigen::VectorXd::Zero(side_rows);
  for (int r = 0; r < side_rows; ++r) {
    if (upper_of[r] >= 0) lambda_net[r] += sol.ineq_duals[upper_of[r]];
    if (lower_of[r] >= 0) lambda_net[r] -= sol.ineq_duals[lower_of[r]];
  }

  Eigen::VectorXd grad0 =
      instance_.risk_aversion * (instance_.Sigma * res.x_star) - instance_.mu;
  std::vector<char> open(n, 0);
  for (int i : support) open[i] = 1;

  for (int i = 0; i < n; ++i) {
    if (open[i]) continue;
    double g = grad0[i] - nu;
    for (int r = 0; r < side_rows; ++r) g += lambda_net[r] * instance_.A(r, i);
    res.alpha_star[i] = std::min(g, 0.0);
  }
  for (int a = 0; a < s; ++a) {
    const int i = support[a];
    if (reg_.is_ridge())
      res.alpha_star[i] = sol.x[a] / (reg_.gamma() * z[i]);
    else
      res.alpha_star[i] = std::min(sol.reduced_costs[a], 0.0);
  }

  res.cut.origin = CutOrigin::Optimality;
  res.cut.coefficients.resize(n);
  for (int i = 0; i < n; ++i) res.cut.coefficients[i] = -reg_.conjugate(res.alpha_star[i]);
  res.cut.constant = res.f_value - res.cut.coefficients.dot(z);
  res.cut.generated_at = z;
  return res;
}

}  // namespace logicut
