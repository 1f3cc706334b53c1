#include "logicut/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace logicut {
namespace {

constexpr double kPivTol = 1e-9;     // minimum magnitude of a pivot element
constexpr double kDegenTol = 1e-11;  // step below this counts as degenerate
constexpr double kFeasTol = 1e-7;    // accepted bound violation for warm bases
constexpr double kPhase1Tol = 1e-7;  // phase-1 optimum above this -> Infeasible
constexpr int kRefactorEvery = 64;

bool finite(double v) { return std::abs(v) < kInf; }

// Revised bounded-variable primal simplex with an explicit basis inverse.
// Internal column order: structurals, slacks (one per inequality row),
// then any artificials appended for the initial basis.
class SimplexSolver {
 public:
  SimplexSolver(const LinearProgram& lp, const SimplexOptions& opts)
      : n_eq_(lp.num_eq()), n_in_(lp.num_ineq()), n_struct_(lp.num_vars()), tol_(opts.tol) {
    m_ = n_eq_ + n_in_;
    A_.resize(m_, n_struct_);
    rhs_.resize(m_);
    if (n_eq_ > 0) {
      A_.topRows(n_eq_) = lp.A_eq;
      rhs_.head(n_eq_) = lp.b_eq;
    }
    if (n_in_ > 0) {
      A_.bottomRows(n_in_) = lp.C_in;
      rhs_.tail(n_in_) = lp.g_in;
    }
    for (int j = 0; j < n_struct_; ++j) {
      lo_.push_back(lp.lo[j]);
      hi_.push_back(lp.hi[j]);
      cost_.push_back(lp.c[j]);
    }
    for (int k = 0; k < n_in_; ++k) {
      lo_.push_back(0.0);
      hi_.push_back(kInf);
      cost_.push_back(0.0);
    }
    art_row_.assign(lo_.size(), -1);
    art_sign_.assign(lo_.size(), 0.0);
    int base = opts.max_pivots > 0 ? opts.max_pivots : 50 * (m_ + n_struct_ + n_in_);
    max_pivots_ = base;
    bland_after_ = 2 * (m_ + n_struct_ + n_in_);
    warm_ = opts.warm_start;
  }

  KernelSolution run() {
    KernelSolution sol;
    for (int j = 0; j < n_struct_; ++j) {
      if (lo_[j] > hi_[j] + kFeasTol) {
        sol.status = KernelStatus::Infeasible;
        sol.x = Eigen::VectorXd::Zero(n_struct_);
        return sol;
      }
    }
    if (m_ == 0) return solve_unconstrained();

    stat_.assign(total(), VarStatus::AtLower);
    xv_.assign(total(), 0.0);

    bool warm_ok = warm_ != nullptr && try_warm_basis();
    if (!warm_ok) {
      if (!cold_start(sol)) return sol;  // phase 1 decided infeasible / limit
    }
    return phase2();
  }

 private:
  int total() const { return static_cast<int>(lo_.size()); }

  void load_col(int j, Eigen::VectorXd& out) const {
    out.setZero(m_);
    if (j < n_struct_) {
      out = A_.col(j);
    } else if (art_row_[j] < 0) {
      out[n_eq_ + (j - n_struct_)] = 1.0;
    } else {
      out[art_row_[j]] = art_sign_[j];
    }
  }

  double col_dot(int j, const Eigen::VectorXd& v) const {
    if (j < n_struct_) return A_.col(j).dot(v);
    if (art_row_[j] < 0) return v[n_eq_ + (j - n_struct_)];
    return art_sign_[j] * v[art_row_[j]];
  }

  // ---- degenerate LP with no rows -------------------------------------
  KernelSolution solve_unconstrained() {
    KernelSolution sol;
    sol.x.setZero(n_struct_);
    sol.eq_duals.resize(0);
    sol.ineq_duals.resize(0);
    sol.reduced_costs.resize(n_struct_);
    sol.bound_duals = Eigen::VectorXd::Zero(n_struct_);
    sol.var_status.assign(n_struct_, VarStatus::AtLower);
    for (int j = 0; j < n_struct_; ++j) {
      double c = cost_[j];
      sol.reduced_costs[j] = c;
      if (c > tol_) {
        if (!finite(lo_[j])) {
          sol.status = KernelStatus::Unbounded;
          sol.certificate = Eigen::VectorXd::Zero(n_struct_);
          sol.certificate[j] = -1.0;
          return sol;
        }
        sol.x[j] = lo_[j];
        sol.var_status[j] = VarStatus::AtLower;
        sol.bound_duals[j] = c;
      } else if (c < -tol_) {
        if (!finite(hi_[j])) {
          sol.status = KernelStatus::Unbounded;
          sol.certificate = Eigen::VectorXd::Zero(n_struct_);
          sol.certificate[j] = 1.0;
          return sol;
        }
        sol.x[j] = hi_[j];
        sol.var_status[j] = VarStatus::AtUpper;
        sol.bound_duals[j] = -c;
      } else if (finite(lo_[j])) {
        sol.x[j] = lo_[j];
      } else if (finite(hi_[j])) {
        sol.x[j] = hi_[j];
        sol.var_status[j] = VarStatus::AtUpper;
      } else {
        sol.var_status[j] = VarStatus::FreeNonbasic;
      }
    }
    sol.objective = 0.0;
    for (int j = 0; j < n_struct_; ++j) sol.objective += cost_[j] * sol.x[j];
    sol.status = KernelStatus::Optimal;
    return sol;
  }

  // ---- start-up --------------------------------------------------------
  void set_nonbasic_value(int j) {
    if (stat_[j] == VarStatus::AtLower) {
      xv_[j] = finite(lo_[j]) ? lo_[j] : 0.0;
      if (!finite(lo_[j])) stat_[j] = VarStatus::FreeNonbasic;
    } else if (stat_[j] == VarStatus::AtUpper) {
      xv_[j] = finite(hi_[j]) ? hi_[j] : 0.0;
      if (!finite(hi_[j])) stat_[j] = VarStatus::FreeNonbasic;
    } else {
      xv_[j] = 0.0;
    }
  }

  // Accept the warm-start hint only if it yields a nonsingular basis whose
  // basic values all lie within bounds; otherwise the caller cold-starts.
  // Hint covers structurals + the first (hint_size - n_struct) slacks; any
  // newer slack columns (rows appended since the hint was taken) are Basic.
  bool try_warm_basis() {
    int covered = static_cast<int>(warm_->size());
    if (covered < n_struct_ || covered > n_struct_ + n_in_) return false;
    for (int j = 0; j < total(); ++j) {
      stat_[j] = j < covered ? (*warm_)[j] : VarStatus::Basic;
      if (stat_[j] == VarStatus::AtLower && !finite(lo_[j])) return false;
      if (stat_[j] == VarStatus::AtUpper && !finite(hi_[j])) return false;
    }
    basis_.clear();
    for (int j = 0; j < total(); ++j) {
      if (stat_[j] == VarStatus::Basic) basis_.push_back(j);
    }
    if (static_cast<int>(basis_.size()) != m_) return false;
    Eigen::MatrixXd B(m_, m_);
    Eigen::VectorXd col(m_);
    for (int i = 0; i < m_; ++i) {
      load_col(basis_[i], col);
      B.col(i) = col;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    lu.setThreshold(1e-10);
    if (lu.rank() < m_) return false;
    Binv_ = lu.inverse();
    for (int j = 0; j < total(); ++j) {
      if (stat_[j] != VarStatus::Basic) set_nonbasic_value(j);
    }
    recompute_basics();
    for (int i = 0; i < m_; ++i) {
      int j = basis_[i];
      if (xv_[j] < lo_[j] - kFeasTol || xv_[j] > hi_[j] + kFeasTol) return false;
    }
    return true;
  }

  // All-artificial start followed by a phase-1 minimization of the total
  // artificial mass. Returns false with sol filled when the solve ends here.
  bool cold_start(KernelSolution& sol) {
    basis_.clear();
    for (int j = 0; j < total(); ++j) {
      stat_[j] = VarStatus::AtLower;
      set_nonbasic_value(j);
    }
    Eigen::VectorXd residual = rhs_;
    for (int j = 0; j < total(); ++j) {
      if (xv_[j] != 0.0) residual -= xv_[j] * A_col_cached(j);
    }
    for (int r = 0; r < m_; ++r) {
      double s = residual[r] >= 0.0 ? 1.0 : -1.0;
      lo_.push_back(0.0);
      hi_.push_back(kInf);
      cost_.push_back(0.0);
      art_row_.push_back(r);
      art_sign_.push_back(s);
      int j = total() - 1;
      stat_.push_back(VarStatus::Basic);
      xv_.push_back(std::abs(residual[r]));
      basis_.push_back(j);
    }
    Binv_.setIdentity(m_, m_);
    for (int r = 0; r < m_; ++r) Binv_(r, r) = art_sign_[basis_[r]];

    phase1_ = true;
    KernelStatus st = iterate();
    phase1_ = false;
    if (st == KernelStatus::IterationLimit) {
      finalize(sol, KernelStatus::IterationLimit);
      return false;
    }
    double infeas = 0.0;
    for (int j = n_struct_ + n_in_; j < total(); ++j) infeas += xv_[j];
    if (infeas > kPhase1Tol) {
      finalize(sol, KernelStatus::Infeasible);
      sol.certificate = duals_raw(true);
      return false;
    }
    expel_artificials();
    for (int j = n_struct_ + n_in_; j < total(); ++j) {
      lo_[j] = hi_[j] = 0.0;  // pin leftover artificials so phase 2 ignores them
      if (stat_[j] != VarStatus::Basic) xv_[j] = 0.0;
    }
    return true;
  }

  Eigen::VectorXd A_col_cached(int j) const {
    Eigen::VectorXd col(m_);
    load_col(j, col);
    return col;
  }

  // Pivot still-basic artificials onto any admissible structural/slack column
  // so that phase 2 prices a clean basis. A row with no candidate is
  // redundant; its artificial stays basic at zero, pinned by its bounds.
  void expel_artificials() {
    Eigen::VectorXd brow(m_);
    for (int i = 0; i < m_; ++i) {
      int jb = basis_[i];
      if (art_row_[jb] < 0) continue;
      brow = Binv_.row(i).transpose();
      int pick = -1;
      for (int j = 0; j < n_struct_ + n_in_; ++j) {
        if (stat_[j] == VarStatus::Basic) continue;
        if (lo_[j] >= hi_[j] - kDegenTol && finite(lo_[j])) continue;
        if (std::abs(col_dot(j, brow)) > 1e-8) {
          pick = j;
          break;
        }
      }
      if (pick < 0) continue;
      Eigen::VectorXd w = Binv_ * A_col_cached(pick);
      apply_pivot(pick, i, w, /*dir=*/1.0, /*step=*/0.0, /*leave_to_upper=*/false);
    }
  }

  // ---- main loop -------------------------------------------------------
  KernelStatus iterate() {
    Eigen::VectorXd pi(m_), w(m_);
    while (true) {
      if (pivots_ >= max_pivots_) return KernelStatus::IterationLimit;
      compute_duals(pi);
      int enter = -1;
      double best = tol_;
      double enter_d = 0.0;
      for (int j = 0; j < total(); ++j) {
        if (stat_[j] == VarStatus::Basic) continue;
        if (lo_[j] >= hi_[j] - kDegenTol && finite(lo_[j]) && finite(hi_[j])) continue;
        double d = current_cost(j) - col_dot(j, pi);
        double viol = 0.0;
        if (stat_[j] == VarStatus::AtLower && d < -tol_) viol = -d;
        else if (stat_[j] == VarStatus::AtUpper && d > tol_) viol = d;
        else if (stat_[j] == VarStatus::FreeNonbasic && std::abs(d) > tol_) viol = std::abs(d);
        if (viol > 0.0 && bland_) {
          enter = j;
          enter_d = d;
          break;
        }
        if (viol > best) {
          best = viol;
          enter = j;
          enter_d = d;
        }
      }
      if (enter < 0) return KernelStatus::Optimal;

      double dir = 1.0;
      if (stat_[enter] == VarStatus::AtUpper) dir = -1.0;
      else if (stat_[enter] == VarStatus::FreeNonbasic) dir = enter_d > 0.0 ? -1.0 : 1.0;

      w = Binv_ * A_col_cached(enter);
      double t_best = kInf;
      if (finite(lo_[enter]) && finite(hi_[enter])) t_best = hi_[enter] - lo_[enter];
      int leave_pos = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < m_; ++i) {
        int jb = basis_[i];
        double rate = -dir * w[i];
        double limit = kInf;
        bool to_upper = false;
        if (rate < -kPivTol) {
          if (!finite(lo_[jb])) continue;
          limit = std::max(0.0, xv_[jb] - lo_[jb]) / (-rate);
        } else if (rate > kPivTol) {
          if (!finite(hi_[jb])) continue;
          limit = std::max(0.0, hi_[jb] - xv_[jb]) / rate;
          to_upper = true;
        } else {
          continue;
        }
        if (limit < t_best - kDegenTol) {
          t_best = limit;
          leave_pos = i;
          leave_to_upper = to_upper;
        } else if (limit < t_best + kDegenTol) {
          // Tied blocking candidates: prefer the smallest variable index
          // (keeps Bland's rule anti-cycling), and prefer a basis change over
          // a bound flip. Keep the tighter of the tied limits as the step.
          bool take = leave_pos < 0 || jb < basis_[leave_pos];
          if (take) {
            t_best = std::min(t_best, limit);
            leave_pos = i;
            leave_to_upper = to_upper;
          }
        }
      }
      if (!finite(t_best)) {
        if (phase1_) throw std::runtime_error("phase-1 objective unbounded");
        unbounded_enter_ = enter;
        unbounded_dir_ = dir;
        return KernelStatus::Unbounded;
      }
      if (t_best <= kDegenTol) ++degen_;
      if (degen_ > bland_after_) bland_ = true;
      ++pivots_;
      if (leave_pos < 0) {
        // bound flip: the entering variable runs to its other bound
        for (int i = 0; i < m_; ++i) xv_[basis_[i]] -= dir * t_best * w[i];
        if (dir > 0.0) {
          xv_[enter] = hi_[enter];
          stat_[enter] = VarStatus::AtUpper;
        } else {
          xv_[enter] = lo_[enter];
          stat_[enter] = VarStatus::AtLower;
        }
      } else {
        apply_pivot(enter, leave_pos, w, dir, t_best, leave_to_upper);
      }
      if (pivots_ % kRefactorEvery == 0) refactorize();
    }
  }

  void apply_pivot(int enter, int leave_pos, const Eigen::VectorXd& w, double dir,
                   double step, bool leave_to_upper) {
    int leave = basis_[leave_pos];
    for (int i = 0; i < m_; ++i) xv_[basis_[i]] -= dir * step * w[i];
    xv_[enter] += dir * step;
    if (leave_to_upper) {
      xv_[leave] = hi_[leave];
      stat_[leave] = VarStatus::AtUpper;
    } else {
      xv_[leave] = finite(lo_[leave]) ? lo_[leave] : 0.0;
      stat_[leave] = finite(lo_[leave]) ? VarStatus::AtLower : VarStatus::FreeNonbasic;
    }
    stat_[enter] = VarStatus::Basic;
    basis_[leave_pos] = enter;
    double piv = w[leave_pos];
    Binv_.row(leave_pos) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == leave_pos) continue;
      double f = w[i];
      if (f != 0.0) Binv_.row(i) -= f * Binv_.row(leave_pos);
    }
  }

  void refactorize() {
    Eigen::MatrixXd B(m_, m_);
    Eigen::VectorXd col(m_);
    for (int i = 0; i < m_; ++i) {
      load_col(basis_[i], col);
      B.col(i) = col;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    lu.setThreshold(1e-12);
    if (lu.rank() < m_) throw std::runtime_error("simplex basis became singular");
    Binv_ = lu.inverse();
    recompute_basics();
  }

  void recompute_basics() {
    Eigen::VectorXd resid = rhs_;
    for (int j = 0; j < total(); ++j) {
      if (stat_[j] != VarStatus::Basic && xv_[j] != 0.0) resid -= xv_[j] * A_col_cached(j);
    }
    Eigen::VectorXd xb = Binv_ * resid;
    for (int i = 0; i < m_; ++i) xv_[basis_[i]] = xb[i];
  }

  double current_cost(int j) const { return phase1_ ? (art_row_[j] >= 0 ? 1.0 : 0.0) : cost_[j]; }

  void compute_duals(Eigen::VectorXd& pi) const {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = current_cost(basis_[i]);
    pi = Binv_.transpose() * cb;
  }

  Eigen::VectorXd duals_raw(bool phase1) const {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) {
      int j = basis_[i];
      cb[i] = phase1 ? (art_row_[j] >= 0 ? 1.0 : 0.0) : cost_[j];
    }
    return Binv_.transpose() * cb;
  }

  // ---- phase 2 and extraction -----------------------------------------
  KernelSolution phase2() {
    KernelSolution sol;
    phase1_ = false;
    KernelStatus st = iterate();
    if (st == KernelStatus::Unbounded) {
      finalize(sol, KernelStatus::Unbounded);
      Eigen::VectorXd ray = Eigen::VectorXd::Zero(n_struct_);
      Eigen::VectorXd w = Binv_ * A_col_cached(unbounded_enter_);
      if (unbounded_enter_ < n_struct_) ray[unbounded_enter_] = unbounded_dir_;
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] < n_struct_) ray[basis_[i]] = -unbounded_dir_ * w[i];
      }
      sol.certificate = ray;
      return sol;
    }
    finalize(sol, st);
    return sol;
  }

  void finalize(KernelSolution& sol, KernelStatus st) {
    sol.status = st;
    sol.x.resize(n_struct_);
    for (int j = 0; j < n_struct_; ++j) sol.x[j] = xv_[j];
    sol.objective = 0.0;
    for (int j = 0; j < n_struct_; ++j) sol.objective += cost_[j] * sol.x[j];
    sol.iterations = pivots_;
    Eigen::VectorXd pi = duals_raw(false);
    sol.eq_duals = pi.head(n_eq_);
    sol.ineq_duals.resize(n_in_);
    for (int k = 0; k < n_in_; ++k) sol.ineq_duals[k] = std::max(0.0, -pi[n_eq_ + k]);
    sol.reduced_costs.resize(n_struct_);
    sol.bound_duals = Eigen::VectorXd::Zero(n_struct_);
    for (int j = 0; j < n_struct_; ++j) {
      double d = stat_[j] == VarStatus::Basic ? 0.0 : cost_[j] - col_dot(j, pi);
      sol.reduced_costs[j] = d;
      if (stat_[j] == VarStatus::AtLower) sol.bound_duals[j] = std::max(0.0, d);
      else if (stat_[j] == VarStatus::AtUpper) sol.bound_duals[j] = std::max(0.0, -d);
    }
    sol.var_status.assign(stat_.begin(), stat_.begin() + n_struct_ + n_in_);
  }

  int m_ = 0, n_eq_ = 0, n_in_ = 0, n_struct_ = 0;
  Eigen::MatrixXd A_;
  Eigen::VectorXd rhs_;
  std::vector<double> lo_, hi_, cost_;
  std::vector<int> art_row_;
  std::vector<double> art_sign_;
  std::vector<int> basis_;
  std::vector<VarStatus> stat_;
  std::vector<double> xv_;
  Eigen::MatrixXd Binv_;
  const std::vector<VarStatus>* warm_ = nullptr;
  double tol_;
  int max_pivots_ = 0, bland_after_ = 0, pivots_ = 0, degen_ = 0;
  bool bland_ = false, phase1_ = false;
  int unbounded_enter_ = -1;
  double unbounded_dir_ = 1.0;
};

}  // namespace

LinearProgram LinearProgram::make(int nvars) {
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(nvars);
  lp.A_eq.resize(0, nvars);
  lp.b_eq.resize(0);
  lp.C_in.resize(0, nvars);
  lp.g_in.resize(0);
  lp.lo = Eigen::VectorXd::Constant(nvars, -kInf);
  lp.hi = Eigen::VectorXd::Constant(nvars, kInf);
  return lp;
}

KernelSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& opts) {
  if (lp.c.size() == 0) throw std::invalid_argument("LP has no variables");
  if (lp.A_eq.rows() != lp.b_eq.size() || lp.C_in.rows() != lp.g_in.size() ||
      lp.A_eq.cols() != lp.c.size() || lp.C_in.cols() != lp.c.size() ||
      lp.lo.size() != lp.c.size() || lp.hi.size() != lp.c.size()) {
    throw std::invalid_argument("LP dimensions are inconsistent");
  }
  SimplexSolver solver(lp, opts);
  return solver.run();
}

KernelSolution simplex_solve(const LinearProgram& lp, double tol) {
  SimplexOptions opts;
  opts.tol = tol;
  return simplex_solve(lp, opts);
}

}  // namespace logicut
