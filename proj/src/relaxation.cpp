#include "logicut/relaxation.hpp"

#include <cmath>
#include <stdexcept>

#include "logicut/lp.hpp"

namespace logicut {

namespace {

constexpr double kEtaFloor = -1e12;

Eigen::VectorXd to_vec(const std::vector<int>& z) {
  Eigen::VectorXd v(z.size());
  for (size_t i = 0; i < z.size(); ++i) v[i] = z[i];
  return v;
}

// Master LP over (z, eta): min c^T z + eta subject to Bool(Z), the budget
// row, and one inequality row per cut. eta carries a deep floor so the LP
// stays bounded while only feasibility cuts are present.
LinearProgram build_master(const FeasibleSet& feasible, const Eigen::VectorXd& c,
                           const std::vector<Cut>& cuts) {
  const int n = feasible.n();
  LinearProgram lp = LinearProgram::make(n + 1);
  lp.c.head(n) = c;
  lp.c[n] = 1.0;
  for (int i = 0; i < n; ++i) {
    lp.lo[i] = feasible.lower()[i];
    lp.hi[i] = feasible.upper()[i];
  }
  lp.lo[n] = kEtaFloor;
  lp.hi[n] = kInf;

  const int budget_rows = feasible.cardinality() ? 1 : 0;
  const int rows = budget_rows + static_cast<int>(cuts.size());
  lp.C_in = Eigen::MatrixXd::Zero(rows, n + 1);
  lp.g_in = Eigen::VectorXd::Zero(rows);
  int r = 0;
  if (feasible.cardinality()) {
    lp.C_in.row(r).head(n).setOnes();
    lp.g_in[r] = *feasible.cardinality();
    ++r;
  }
  for (const Cut& cut : cuts) {
    if (cut.origin == CutOrigin::Optimality) {
      // eta >= constant + coeff^T z  ->  coeff^T z - eta <= -constant
      lp.C_in.row(r).head(n) = cut.coefficients;
      lp.C_in(r, n) = -1.0;
      lp.g_in[r] = -cut.constant;
    } else {
      // coeff^T z >= constant  ->  -coeff^T z <= -constant
      lp.C_in.row(r).head(n) = -cut.coefficients;
      lp.g_in[r] = -cut.constant;
    }
    ++r;
  }
  return lp;
}

}  // namespace

RelaxationResult kelley_solve(const Oracle& oracle, const FeasibleSet& feasible,
                              const Eigen::VectorXd& c, double tol, int max_iter) {
  const int n = feasible.n();
  if (c.size() != n || oracle.num_binaries() != n)
    throw std::invalid_argument("kelley_solve: dimension mismatch");

  RelaxationResult result;

  // Seed the epigraph at the loosest point of the box so eta is bounded
  // from the first master solve.
  Eigen::VectorXd z0(n);
  for (int i = 0; i < n; ++i) z0[i] = feasible.upper()[i];
  result.cut_pool.push_back(oracle.evaluate_fractional(z0).cut);

  std::vector<VarStatus> basis;
  for (int iter = 0; iter < max_iter; ++iter) {
    LinearProgram lp = build_master(feasible, c, result.cut_pool);
    SimplexOptions opts;
    if (!basis.empty()) opts.warm_start = &basis;
    KernelSolution sol = simplex_solve(lp, opts);
    ++result.iterations;
    if (sol.status == KernelStatus::Infeasible) {
      // The accumulated feasibility cuts have emptied Bool(Z).
      result.lower_bound = kInf;
      result.converged = true;
      return result;
    }
    if (sol.status != KernelStatus::Optimal)
      throw std::runtime_error("kelley_solve: master LP did not solve");
    basis = sol.var_status;

    Eigen::VectorXd z_t = sol.x.head(n);
    for (int i = 0; i < n; ++i)
      z_t[i] = std::min(std::max(z_t[i], double(feasible.lower()[i])),
                        double(feasible.upper()[i]));
    const double eta_t = sol.x[n];
    result.lower_bound = sol.objective;
    result.z_frac = z_t;

    SubproblemResult sub = oracle.evaluate_fractional(z_t);
    result.cut_pool.push_back(sub.cut);
    if (sub.status == SubproblemStatus::Feasible) {
      result.alpha = sub.alpha_star;
      const double gap = sub.f_value - eta_t;
      const double stop = tol > 0.0 ? tol : 1e-6 * (1.0 + std::abs(sub.f_value));
      if (gap <= stop) {
        result.converged = true;
        return result;
      }
    }
  }
  return result;
}

RelaxationResult subgradient_ascent(const Oracle& oracle, const FeasibleSet& feasible,
                                    const Eigen::VectorXd& c, int steps, double step0) {
  const int n = feasible.n();
  if (c.size() != n || oracle.num_binaries() != n)
    throw std::invalid_argument("subgradient_ascent: dimension mismatch");
  if (!oracle.has_h_oracle())
    throw std::logic_error("subgradient_ascent: oracle lacks an explicit h evaluation");

  const Regularizer& reg = oracle.regularizer();
  auto conjugate_slope = [&reg](double beta) {
    if (reg.is_ridge()) return reg.gamma() * beta;
    if (beta > 0.0) return reg.M();
    if (beta < 0.0) return -reg.M();
    return 0.0;
  };

  RelaxationResult result;
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  const double scale = step0 * oracle.step_scale();

  for (int t = 1; t <= steps; ++t) {
    Oracle::HEval h = oracle.h_eval(alpha);

    Eigen::VectorXd reduced(n);
    for (int i = 0; i < n; ++i) reduced[i] = c[i] - reg.conjugate(alpha[i]);
    FeasibleSet::LinearMinimum lin = feasible.linear_minimize(reduced);
    const double q = h.value + lin.value;
    ++result.iterations;

    if (q > result.lower_bound) {
      result.lower_bound = q;
      result.alpha = alpha;
      result.z_frac = to_vec(lin.z);
    }

    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i)
      g[i] = -h.minimizer[i] - lin.z[i] * conjugate_slope(alpha[i]);
    alpha += (scale / std::sqrt(double(t))) * g;
  }
  return result;
}

}  // namespace logicut
