#include "logicut/qp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace logicut {
namespace {

constexpr double kSigma = 1e-6;      // proximal term on x
constexpr double kRelax = 1.6;       // over-relaxation
constexpr double kEqRhoBoost = 1e3;  // stiffer penalty on equality rows
constexpr double kCertTol = 1e-9;    // relative tolerance for divergence certificates

struct Stacked {
  // rows of l <= M x <= u: equalities, inequalities, then the box
  Eigen::MatrixXd M;
  Eigen::VectorXd l, u;
  int n_eq = 0, n_in = 0, n = 0;
  int rows() const { return n_eq + n_in + n; }
};

Stacked stack(const QuadraticProgram& qp) {
  Stacked s;
  s.n_eq = qp.num_eq();
  s.n_in = qp.num_ineq();
  s.n = qp.num_vars();
  int m = s.rows();
  s.M.setZero(m, s.n);
  s.l.resize(m);
  s.u.resize(m);
  if (s.n_eq > 0) {
    s.M.topRows(s.n_eq) = qp.A_eq;
    s.l.head(s.n_eq) = qp.b_eq;
    s.u.head(s.n_eq) = qp.b_eq;
  }
  if (s.n_in > 0) {
    s.M.middleRows(s.n_eq, s.n_in) = qp.C_in;
    s.l.segment(s.n_eq, s.n_in).setConstant(-kInf);
    s.u.segment(s.n_eq, s.n_in) = qp.g_in;
  }
  s.M.bottomRows(s.n) = Eigen::MatrixXd::Identity(s.n, s.n);
  s.l.tail(s.n) = qp.lo;
  s.u.tail(s.n) = qp.hi;
  return s;
}

Eigen::VectorXd clamp_rows(const Eigen::VectorXd& v, const Eigen::VectorXd& l,
                           const Eigen::VectorXd& u) {
  return v.cwiseMax(l).cwiseMin(u);
}

class AdmmSolver {
 public:
  AdmmSolver(const QuadraticProgram& qp, double tol, int max_iter)
      : qp_(qp), s_(stack(qp)), tol_(tol), max_iter_(max_iter) {
    n_ = s_.n;
    m_ = s_.rows();
    x_ = clamp_rows(Eigen::VectorXd::Zero(n_), qp.lo, qp.hi);
    z_ = clamp_rows(s_.M * x_, s_.l, s_.u);
    y_ = Eigen::VectorXd::Zero(m_);
    rho_bar_ = 0.1;
    refactor();
  }

  KernelSolution run() {
    Eigen::VectorXd y_prev(m_), x_prev(n_);
    for (iter_ = 0; iter_ < max_iter_; ++iter_) {
      y_prev = y_;
      x_prev = x_;
      step();
      if (iter_ % 5 == 0) {
        double rp = primal_residual();
        double rd = dual_residual();
        if (rp <= tol_ && rd <= tol_) {
          polish();
          return extract(KernelStatus::Optimal);
        }
        // A looser pass that polish can usually sharpen to full tolerance.
        if (rp <= 1e-6 * pscale() && rd <= 1e-6 * dscale() && polish()) {
          return extract(KernelStatus::Optimal);
        }
      }
      if (iter_ % 25 == 24) {
        Eigen::VectorXd dy = y_ - y_prev;
        Eigen::VectorXd dx = x_ - x_prev;
        if (primal_infeasible(dy)) {
          KernelSolution sol = extract(KernelStatus::Infeasible);
          sol.certificate = dy / std::max(dy.lpNorm<Eigen::Infinity>(), 1e-300);
          return sol;
        }
        if (dual_infeasible(dx)) {
          KernelSolution sol = extract(KernelStatus::Unbounded);
          sol.certificate = dx / std::max(dx.lpNorm<Eigen::Infinity>(), 1e-300);
          return sol;
        }
      }
      if (iter_ % 100 == 99) adapt_rho();
    }
    double rp = primal_residual();
    double rd = dual_residual();
    if ((rp <= tol_ && rd <= tol_) || polish()) return extract(KernelStatus::Optimal);
    return extract(KernelStatus::IterationLimit);
  }

 private:
  void refactor() {
    rho_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      bool eq_row = i < s_.n_eq || (s_.u[i] - s_.l[i]) < 1e-14;
      rho_[i] = eq_row ? rho_bar_ * kEqRhoBoost : rho_bar_;
    }
    Eigen::MatrixXd K = qp_.Q + kSigma * Eigen::MatrixXd::Identity(n_, n_) +
                        s_.M.transpose() * rho_.asDiagonal() * s_.M;
    llt_.compute(K);
    if (llt_.info() != Eigen::Success) throw std::runtime_error("QP splitting matrix not SPD");
    rho_at_factor_ = rho_bar_;
  }

  void step() {
    Eigen::VectorXd rhs = kSigma * x_ - qp_.d + s_.M.transpose() * (rho_.cwiseProduct(z_) - y_);
    Eigen::VectorXd xt = llt_.solve(rhs);
    Eigen::VectorXd zt = s_.M * xt;
    x_ = kRelax * xt + (1.0 - kRelax) * x_;
    Eigen::VectorXd zh = kRelax * zt + (1.0 - kRelax) * z_;
    Eigen::VectorXd z_new = clamp_rows(zh + y_.cwiseQuotient(rho_), s_.l, s_.u);
    y_ += rho_.cwiseProduct(zh - z_new);
    z_ = z_new;
  }

  double primal_residual() const { return (s_.M * x_ - z_).lpNorm<Eigen::Infinity>(); }
  double dual_residual() const {
    return (qp_.Q * x_ + qp_.d + s_.M.transpose() * y_).lpNorm<Eigen::Infinity>();
  }
  double pscale() const {
    return std::max({(s_.M * x_).lpNorm<Eigen::Infinity>(), z_.lpNorm<Eigen::Infinity>(), 1.0});
  }
  double dscale() const {
    return std::max({(qp_.Q * x_).lpNorm<Eigen::Infinity>(), qp_.d.lpNorm<Eigen::Infinity>(),
                     (s_.M.transpose() * y_).lpNorm<Eigen::Infinity>(), 1.0});
  }

  void adapt_rho() {
    double rp = primal_residual() / pscale();
    double rd = dual_residual() / dscale();
    if (rp < 1e-300 && rd < 1e-300) return;
    double factor = std::sqrt(std::max(rp, 1e-300) / std::max(rd, 1e-300));
    factor = std::clamp(factor, 0.1, 10.0);
    rho_bar_ = std::clamp(rho_bar_ * factor, 1e-6, 1e6);
    double drift = rho_bar_ / rho_at_factor_;
    if (drift > 5.0 || drift < 0.2) refactor();
  }

  bool primal_infeasible(const Eigen::VectorXd& dy) const {
    double nv = dy.lpNorm<Eigen::Infinity>();
    if (nv < 1e-12) return false;
    if ((s_.M.transpose() * dy).lpNorm<Eigen::Infinity>() > kCertTol * nv * (1.0 + mnorm()))
      return false;
    double support = 0.0;
    for (int i = 0; i < m_; ++i) {
      double up = std::max(dy[i], 0.0);
      double dn = std::min(dy[i], 0.0);
      if (up > kCertTol * nv && s_.u[i] >= kInf) return false;
      if (-dn > kCertTol * nv && s_.l[i] <= -kInf) return false;
      if (s_.u[i] < kInf) support += s_.u[i] * up;
      if (s_.l[i] > -kInf) support += s_.l[i] * dn;
    }
    return support < -kCertTol * nv;
  }

  bool dual_infeasible(const Eigen::VectorXd& dx) const {
    double nv = dx.lpNorm<Eigen::Infinity>();
    if (nv < 1e-12) return false;
    if ((qp_.Q * dx).lpNorm<Eigen::Infinity>() > kCertTol * nv * (1.0 + qnorm())) return false;
    if (qp_.d.dot(dx) > -kCertTol * nv * (1.0 + qp_.d.lpNorm<Eigen::Infinity>())) return false;
    Eigen::VectorXd mdx = s_.M * dx;
    for (int i = 0; i < m_; ++i) {
      if (mdx[i] > kCertTol * nv && s_.u[i] < kInf) return false;
      if (mdx[i] < -kCertTol * nv && s_.l[i] > -kInf) return false;
    }
    return true;
  }

  double mnorm() const { return s_.M.lpNorm<Eigen::Infinity>(); }
  double qnorm() const { return qp_.Q.lpNorm<Eigen::Infinity>(); }

  // Solve the KKT system of the constraints the iterates identified as tight
  // and accept the result only if it beats the iterate and meets `tol_`.
  bool polish() {
    double ythr = std::max(1e-10, 1e-8 * y_.lpNorm<Eigen::Infinity>());
    std::vector<int> act_row;
    std::vector<double> act_rhs;
    for (int i = 0; i < m_; ++i) {
      bool eq_row = s_.u[i] - s_.l[i] < 1e-14;
      double slack_lo = s_.l[i] > -kInf ? z_[i] - s_.l[i] : kInf;
      double slack_hi = s_.u[i] < kInf ? s_.u[i] - z_[i] : kInf;
      if (eq_row) {
        act_row.push_back(i);
        act_rhs.push_back(s_.u[i]);
      } else if (y_[i] > ythr || slack_hi < 1e-7 * (1.0 + std::abs(s_.u[i]))) {
        if (s_.u[i] < kInf) {
          act_row.push_back(i);
          act_rhs.push_back(s_.u[i]);
        }
      } else if (y_[i] < -ythr || slack_lo < 1e-7 * (1.0 + std::abs(s_.l[i]))) {
        if (s_.l[i] > -kInf) {
          act_row.push_back(i);
          act_rhs.push_back(s_.l[i]);
        }
      }
    }
    int k = static_cast<int>(act_row.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n_ + k, n_ + k);
    K.topLeftCorner(n_, n_) = qp_.Q + 1e-9 * Eigen::MatrixXd::Identity(n_, n_);
    Eigen::VectorXd rhs(n_ + k);
    rhs.head(n_) = -qp_.d;
    for (int a = 0; a < k; ++a) {
      K.block(n_ + a, 0, 1, n_) = s_.M.row(act_row[a]);
      K.block(0, n_ + a, n_, 1) = s_.M.row(act_row[a]).transpose();
      K(n_ + a, n_ + a) = -1e-9;
      rhs[n_ + a] = act_rhs[a];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    Eigen::VectorXd sol = lu.solve(rhs);
    for (int pass = 0; pass < 2; ++pass) {  // iterative refinement
      Eigen::VectorXd resid = rhs - K * sol;
      for (int a = 0; a < k; ++a) resid[n_ + a] -= 1e-9 * sol[n_ + a];  // undo dual reg
      resid.head(n_) += 1e-9 * sol.head(n_);
      sol += lu.solve(resid);
    }
    Eigen::VectorXd xp = sol.head(n_);
    Eigen::VectorXd yp = Eigen::VectorXd::Zero(m_);
    for (int a = 0; a < k; ++a) yp[act_row[a]] = sol[n_ + a];
    // wrong-sign multipliers mean the active guess was off; drop tiny ones
    for (int a = 0; a < k; ++a) {
      int i = act_row[a];
      if (s_.u[i] - s_.l[i] < 1e-14) continue;
      bool upper = act_rhs[a] == s_.u[i];
      double v = yp[i];
      if ((upper && v < 0.0) || (!upper && v > 0.0)) {
        if (std::abs(v) > tol_) return false;
        yp[i] = 0.0;
      }
    }
    Eigen::VectorXd mx = s_.M * xp;
    for (int i = 0; i < m_; ++i) {
      if (mx[i] > s_.u[i] + tol_ || mx[i] < s_.l[i] - tol_) return false;
    }
    double rd = (qp_.Q * xp + qp_.d + s_.M.transpose() * yp).lpNorm<Eigen::Infinity>();
    if (rd > tol_) return false;
    x_ = xp;
    y_ = yp;
    z_ = clamp_rows(mx, s_.l, s_.u);
    return true;
  }

  KernelSolution extract(KernelStatus st) {
    KernelSolution sol;
    sol.status = st;
    sol.x = x_;
    sol.objective = 0.5 * x_.dot(qp_.Q * x_) + qp_.d.dot(x_);
    sol.iterations = iter_;
    sol.eq_duals = -y_.head(s_.n_eq);
    sol.ineq_duals = y_.segment(s_.n_eq, s_.n_in).cwiseMax(0.0);
    sol.reduced_costs = -y_.tail(n_);
    sol.bound_duals = Eigen::VectorXd::Zero(n_);
    sol.var_status.assign(n_, VarStatus::Basic);
    for (int j = 0; j < n_; ++j) {
      if (qp_.lo[j] > -kInf && x_[j] - qp_.lo[j] < 1e-7 * (1.0 + std::abs(qp_.lo[j]))) {
        sol.var_status[j] = VarStatus::AtLower;
        sol.bound_duals[j] = std::max(0.0, sol.reduced_costs[j]);
      } else if (qp_.hi[j] < kInf && qp_.hi[j] - x_[j] < 1e-7 * (1.0 + std::abs(qp_.hi[j]))) {
        sol.var_status[j] = VarStatus::AtUpper;
        sol.bound_duals[j] = std::max(0.0, -sol.reduced_costs[j]);
      }
    }
    return sol;
  }

  const QuadraticProgram& qp_;
  Stacked s_;
  double tol_;
  int max_iter_, n_ = 0, m_ = 0, iter_ = 0;
  Eigen::VectorXd x_, z_, y_, rho_;
  double rho_bar_ = 0.1, rho_at_factor_ = 0.1;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

}  // namespace

QuadraticProgram QuadraticProgram::make(int nvars) {
  QuadraticProgram qp;
  qp.Q = Eigen::MatrixXd::Zero(nvars, nvars);
  qp.d = Eigen::VectorXd::Zero(nvars);
  qp.A_eq.resize(0, nvars);
  qp.b_eq.resize(0);
  qp.C_in.resize(0, nvars);
  qp.g_in.resize(0);
  qp.lo = Eigen::VectorXd::Constant(nvars, -kInf);
  qp.hi = Eigen::VectorXd::Constant(nvars, kInf);
  return qp;
}

KernelSolution qp_solve(const QuadraticProgram& qp, double tol, int max_iter) {
  if (qp.d.size() == 0) throw std::invalid_argument("QP has no variables");
  if (qp.Q.rows() != qp.d.size() || qp.Q.cols() != qp.d.size() ||
      qp.A_eq.rows() != qp.b_eq.size() || qp.C_in.rows() != qp.g_in.size() ||
      qp.lo.size() != qp.d.size() || qp.hi.size() != qp.d.size()) {
    throw std::invalid_argument("QP dimensions are inconsistent");
  }
  AdmmSolver solver(qp, tol, max_iter);
  return solver.run();
}

}  // namespace logicut
