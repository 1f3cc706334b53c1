#include "logicut/cg.hpp"

#include <cmath>

namespace logicut {

CgResult cg_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& matvec,
                  const Eigen::VectorXd& rhs, double tol) {
  const int n = static_cast<int>(rhs.size());
  CgResult res;
  res.x = Eigen::VectorXd::Zero(n);
  double rhs_norm = rhs.norm();
  double target = tol * (rhs_norm > 0.0 ? rhs_norm : 1.0);
  Eigen::VectorXd r = rhs;
  if (r.norm() <= target) {
    res.converged = true;
    return res;
  }
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  const int max_iter = 10 * n;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd sp = matvec(p);
    double denom = p.dot(sp);
    if (denom <= 0.0) break;  // matrix not positive definite along p
    double alpha = rr / denom;
    res.x += alpha * p;
    r -= alpha * sp;
    ++res.iterations;
    double rr_new = r.squaredNorm();
    if (std::sqrt(rr_new) <= target) {
      res.converged = true;
      return res;
    }
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  return res;
}

CgResult cg_solve(const Eigen::MatrixXd& S, const Eigen::VectorXd& rhs, double tol) {
  return cg_solve([&S](const Eigen::VectorXd& v) { return Eigen::VectorXd(S * v); }, rhs, tol);
}

}  // namespace logicut
