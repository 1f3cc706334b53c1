#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>

namespace logicut {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Coupling regularizer Omega applied to the continuous variables, one global
// parameter, coordinate-separable:
//
//   BigM : Omega(x) = 0 if max_i |x_i| <= M, +inf otherwise
//   Ridge: Omega(x) = (1/(2 gamma)) * sum_i x_i^2
//
// The conjugate Omega*(beta) prices a unit of the indicator budget and is what
// every optimality cut coefficient is built from (coefficient_i = -Omega*(a_i)).
class Regularizer {
 public:
  enum class Kind { BigM, Ridge };

  static Regularizer big_m(double M) {
    if (!(M > 0.0)) throw std::invalid_argument("Regularizer: M must be > 0");
    return Regularizer(Kind::BigM, M, 0.0);
  }
  static Regularizer ridge(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("Regularizer: gamma must be > 0");
    return Regularizer(Kind::Ridge, 0.0, gamma);
  }

  Kind kind() const { return kind_; }
  bool is_big_m() const { return kind_ == Kind::BigM; }
  bool is_ridge() const { return kind_ == Kind::Ridge; }
  double M() const { return M_; }
  double gamma() const { return gamma_; }

  // Omega evaluated on a full vector. The BigM box test uses an absolute
  // tolerance of 1e-9 because subproblem kernels return x within solver
  // tolerance of the box.
  double omega(const Eigen::VectorXd& x) const {
    if (kind_ == Kind::BigM) {
      for (int i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > M_ + kBoxTol) return kInf;
      return 0.0;
    }
    return x.squaredNorm() / (2.0 * gamma_);
  }

  // Scalar component Omega_i for separable use.
  double omega_scalar(double x) const {
    if (kind_ == Kind::BigM) return std::abs(x) <= M_ + kBoxTol ? 0.0 : kInf;
    return x * x / (2.0 * gamma_);
  }

  // Fenchel conjugate: M|beta| for BigM, (gamma/2) beta^2 for Ridge.
  double conjugate(double beta) const {
    if (kind_ == Kind::BigM) return M_ * std::abs(beta);
    return 0.5 * gamma_ * beta * beta;
  }

  // Ridge perspective term x^2/(2 gamma z), extended to the boundary:
  // 0 when z = 0 and x = 0, +inf when z = 0 and x != 0.
  double perspective_term(double x, double z) const {
    if (kind_ != Kind::Ridge)
      throw std::logic_error("perspective_term: ridge regularizer required");
    if (z > 0.0) return x * x / (2.0 * gamma_ * z);
    return x == 0.0 ? 0.0 : kInf;
  }

  static constexpr double kBoxTol = 1e-9;

 private:
  Regularizer(Kind kind, double M, double gamma) : kind_(kind), M_(M), gamma_(gamma) {}

  Kind kind_;
  double M_;
  double gamma_;
};

}  // namespace logicut
