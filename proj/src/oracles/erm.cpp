#include "logicut/oracles/erm.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "logicut/cg.hpp"
#include "logicut/lp.hpp"
#include "logicut/qp.hpp"

namespace logicut {

ErmOracle::ErmOracle(ErmInstance instance, Regularizer reg)
    : instance_(std::move(instance)), reg_(reg) {
  const auto& X = instance_.X;
  const auto& y = instance_.y;
  if (X.rows() == 0 || X.cols() == 0) throw std::invalid_argument("erm: empty design matrix");
  if (y.size() != X.rows()) throw std::invalid_argument("erm: response length mismatch");
  if (instance_.loss == ErmInstance::Loss::SVM) {
    for (int i = 0; i < y.size(); ++i) {
      if (y[i] != 1.0 && y[i] != -1.0)
        throw std::invalid_argument("erm: SVM labels must be +-1");
    }
  }
  if (instance_.loss == ErmInstance::Loss::OLS) {
    xtx_ = X.transpose() * X;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx_);
    lu.setThreshold(1e-10);
    h_supported_ = lu.rank() == X.cols();
  }
}

SubproblemResult ErmOracle::evaluate(const std::vector<int>& z) const {
  require_binary(z, num_binaries());
  return evaluate_fractional(to_vector(z));
}

SubproblemResult ErmOracle::evaluate_fractional(const Eigen::VectorXd& z) const {
  require_unit_box(z, num_binaries());
  if (reg_.is_big_m()) return eval_bigm(z);
  return instance_.loss == ErmInstance::Loss::OLS ? eval_ridge_ols(z) : eval_ridge_svm(z);
}

// Dual solve of the ridge OLS problem: alpha solves
// (I + gamma X Diag(z) X^T) alpha = y, f = y^T alpha / 2, w = gamma z .* X^T alpha.
// Fractional z gives exactly the perspective-relaxed value.
SubproblemResult ErmOracle::eval_ridge_ols(const Eigen::VectorXd& z) const {
  const auto& X = instance_.X;
  const auto& y = instance_.y;
  const double gamma = reg_.gamma();
  auto matvec = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd xtv = X.transpose() * v;
    return Eigen::VectorXd(v + gamma * (X * z.cwiseProduct(xtv).matrix()));
  };
  CgResult cg = cg_solve(matvec, y, 1e-12);
  if (!cg.converged) throw std::runtime_error("erm: dual CG did not converge");
  const Eigen::VectorXd& alpha = cg.x;
  Eigen::VectorXd scores = X.transpose() * alpha;  // X_j^T alpha per feature

  SubproblemResult res;
  res.f_value = 0.5 * y.dot(alpha);
  res.x_star = gamma * z.cwiseProduct(scores);
  res.alpha_star = alpha;
  res.cut.origin = CutOrigin::Optimality;
  res.cut.coefficients = -(gamma / 2.0) * scores.array().square().matrix();
  res.cut.generated_at = z;
  res.cut.constant = res.f_value - res.cut.coefficients.dot(z);
  return res;
}

// Projected coordinate ascent on the hinge-loss dual
//   max_alpha  -alpha^T y - (gamma/2) sum_j z_j (X_j^T alpha)^2,
//   alpha_i * y_i in [-1, 0],
// with w_j = -gamma z_j X_j^T alpha at the optimum.
SubproblemResult ErmOracle::eval_ridge_svm(const Eigen::VectorXd& z) const {
  const auto& X = instance_.X;
  const auto& y = instance_.y;
  const double gamma = reg_.gamma();
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(p);  // X^T alpha
  Eigen::VectorXd kappa(n);                      // per-coordinate curvature
  for (int i = 0; i < n; ++i) {
    double k = 0.0;
    for (int j = 0; j < p; ++j) k += z[j] * X(i, j) * X(i, j);
    kappa[i] = gamma * k;
  }
  const int max_sweeps = 5000;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (int i = 0; i < n; ++i) {
      double lo = y[i] > 0 ? -1.0 : 0.0;
      double hi = y[i] > 0 ? 0.0 : 1.0;
      double grad = -y[i];
      for (int j = 0; j < p; ++j) grad -= gamma * z[j] * X(i, j) * s[j];
      double target;
      if (kappa[i] > 1e-14) {
        target = std::clamp(alpha[i] + grad / kappa[i], lo, hi);
      } else {
        target = -y[i];  // objective linear in alpha_i with slope -y_i
      }
      double delta = target - alpha[i];
      if (delta != 0.0) {
        alpha[i] = target;
        for (int j = 0; j < p; ++j) s[j] += delta * X(i, j);
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (max_change < 1e-11) break;
  }

  SubproblemResult res;
  double quad = 0.0;
  for (int j = 0; j < p; ++j) quad += z[j] * s[j] * s[j];
  res.f_value = -alpha.dot(y) - (gamma / 2.0) * quad;
  res.x_star = -gamma * z.cwiseProduct(s);
  res.alpha_star = alpha;
  res.cut.origin = CutOrigin::Optimality;
  res.cut.coefficients = -(gamma / 2.0) * s.array().square().matrix();
  res.cut.generated_at = z;
  res.cut.constant = res.f_value - res.cut.coefficients.dot(z);
  return res;
}

// Primal solve with the box |w_j| <= M z_j: a QP for OLS, an LP (hinge slacks)
// for SVM. Cut coefficients are -M |reduced cost of w_j|: the reduced cost is
// the marginal loss decrease per unit of extra box width.
SubproblemResult ErmOracle::eval_bigm(const Eigen::VectorXd& z) const {
  const auto& X = instance_.X;
  const auto& y = instance_.y;
  const double M = reg_.M();
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());

  SubproblemResult res;
  Eigen::VectorXd rc(p);
  if (instance_.loss == ErmInstance::Loss::OLS) {
    QuadraticProgram qp = QuadraticProgram::make(p);
    qp.Q = X.transpose() * X;
    qp.d = -X.transpose() * y;
    qp.lo = -M * z;
    qp.hi = M * z;
    KernelSolution sol = qp_solve(qp, 1e-9);
    if (sol.status != KernelStatus::Optimal) throw std::runtime_error("erm: box QP failed");
    res.f_value = sol.objective + 0.5 * y.squaredNorm();
    res.x_star = sol.x;
    res.alpha_star = y - X * sol.x;
    rc = sol.reduced_costs;
  } else {
    LinearProgram lp = LinearProgram::make(p + n);
    for (int i = 0; i < n; ++i) lp.c[p + i] = 1.0;
    lp.C_in = Eigen::MatrixXd::Zero(n, p + n);
    lp.g_in = Eigen::VectorXd::Constant(n, -1.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) lp.C_in(i, j) = -y[i] * X(i, j);
      lp.C_in(i, p + i) = -1.0;  // -y_i x_i^T w - xi_i <= -1
    }
    for (int j = 0; j < p; ++j) {
      lp.lo[j] = -M * z[j];
      lp.hi[j] = M * z[j];
    }
    for (int i = 0; i < n; ++i) lp.lo[p + i] = 0.0;
    KernelSolution sol = simplex_solve(lp, 1e-9);
    if (sol.status != KernelStatus::Optimal) throw std::runtime_error("erm: hinge LP failed");
    res.f_value = sol.objective;
    res.x_star = sol.x.head(p);
    res.alpha_star = -sol.ineq_duals.cwiseProduct(y);
    rc = sol.reduced_costs.head(p);
  }
  res.cut.origin = CutOrigin::Optimality;
  res.cut.coefficients = -M * rc.array().abs().matrix();
  res.cut.generated_at = z;
  res.cut.constant = res.f_value - res.cut.coefficients.dot(z);
  return res;
}

Oracle::HEval ErmOracle::h_eval(const Eigen::VectorXd& alpha) const {
  if (!h_supported_) throw std::logic_error("erm: h oracle needs OLS with full-rank X^T X");
  if (alpha.size() != num_binaries()) throw std::invalid_argument("erm: alpha dimension");
  const auto& X = instance_.X;
  const auto& y = instance_.y;
  Eigen::VectorXd w = xtx_.ldlt().solve(X.transpose() * y + alpha);
  HEval out;
  out.minimizer = w;
  out.value = 0.5 * (y - X * w).squaredNorm() - w.dot(alpha);
  return out;
}

}  // namespace logicut
