#include "logicut/oracles/facility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "logicut/lp.hpp"
#include "logicut/maxflow.hpp"
#include "logicut/qp.hpp"

namespace logicut {

namespace {
// The ridge perspective diagonal 1/(gamma z) is kept conditioned by treating
// near-zero coordinates as closed; big-M caps scale harmlessly to zero.
constexpr double kOpenTol = 1e-9;
constexpr double kRidgeOpenTol = 1e-7;
constexpr double kDemandTol = 1e-9;
}

FacilityOracle::FacilityOracle(FacilityInstance instance, Regularizer reg)
    : instance_(std::move(instance)), reg_(reg) {
  const int n = static_cast<int>(instance_.capacity.size());
  const int m = static_cast<int>(instance_.demand.size());
  if (n <= 0) throw std::invalid_argument("facility: no facilities");
  if (instance_.transport.rows() != n || instance_.transport.cols() != m)
    throw std::invalid_argument("facility: transport cost dimension mismatch");
  if (instance_.open_cost.size() != 0 && instance_.open_cost.size() != n)
    throw std::invalid_argument("facility: opening cost dimension mismatch");
  for (int i = 0; i < n; ++i)
    if (!(instance_.capacity[i] > 0.0))
      throw std::invalid_argument("facility: capacities must be positive");
  for (int j = 0; j < m; ++j)
    if (instance_.demand[j] < 0.0)
      throw std::invalid_argument("facility: demands must be nonnegative");
  if (instance_.capacity.sum() < instance_.demand.sum() - kDemandTol)
    throw std::invalid_argument("facility: total capacity below total demand");
}

Regularizer FacilityOracle::natural_regularizer() const {
  // The coupling bound is the per-arc cap min(u_i, d_j) * z_i, so the scalar
  // M never enters; any positive value denotes the big-M kind.
  double largest = 1.0;
  for (int i = 0; i < instance_.capacity.size(); ++i)
    for (int j = 0; j < instance_.demand.size(); ++j) largest = std::max(largest, cap(i, j));
  return Regularizer::big_m(largest);
}

SubproblemResult FacilityOracle::evaluate(const std::vector<int>& z) const {
  require_binary(z, num_binaries());
  return eval(to_vector(z), true);
}

SubproblemResult FacilityOracle::evaluate_fractional(const Eigen::VectorXd& z) const {
  require_unit_box(z, num_binaries());
  bool binary = true;
  for (int i = 0; i < z.size(); ++i)
    if (z[i] > kOpenTol && z[i] < 1.0 - kOpenTol) binary = false;
  return eval(z, binary);
}

SubproblemResult FacilityOracle::infeasible_capacity(const Eigen::VectorXd& z,
                                                     bool binary) const {
  const int n = num_binaries();
  SubproblemResult res;
  res.status = SubproblemStatus::Infeasible;
  res.infeasibility_cut_kind = InfeasibilityCutKind::Monotone;
  res.x_star = Eigen::VectorXd::Zero(n * static_cast<int>(instance_.demand.size()));
  res.alpha_star = res.x_star;
  if (binary) {
    std::vector<int> zi(n);
    for (int i = 0; i < n; ++i) zi[i] = z[i] > 0.5 ? 1 : 0;
    res.cut = make_monotone_cut(zi);
    res.cut.generated_at = z;
  } else {
    // Aggregate capacity inequality; every binary point violating it is
    // infeasible, and the current support falls short by assumption.
    res.cut.origin = CutOrigin::Feasibility;
    res.cut.coefficients = instance_.capacity;
    res.cut.constant = instance_.demand.sum();
    res.cut.generated_at = z;
  }
  return res;
}

bool FacilityOracle::routable(const Eigen::VectorXd& z, Cut* cut_if_not) const {
  const int n = num_binaries();
  const int m = static_cast<int>(instance_.demand.size());
  const double total = instance_.demand.sum();

  // Nodes: source, facilities, customers, sink.
  MaxflowGraph graph(n + m + 2);
  const int source = n + m;
  const int sink = n + m + 1;
  for (int i = 0; i < n; ++i) graph.add_arc(source, i, instance_.capacity[i]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (z[i] > kOpenTol) graph.add_arc(i, n + j, cap(i, j) * z[i]);
  for (int j = 0; j < m; ++j) graph.add_arc(n + j, sink, instance_.demand[j]);

  const double value = graph.solve(source, sink);
  if (value >= total - 1e-7 * (1.0 + total)) return true;

  // Min-cut capacity bound: routing all demand needs
  //   sum_{i in R, j not in R} cap_ij z'_i  >=  D - sum_{i not in R} u_i
  //                                             - sum_{j in R} d_j.
  const std::vector<char>& side = graph.source_side();
  Cut cut;
  cut.origin = CutOrigin::Feasibility;
  cut.coefficients = Eigen::VectorXd::Zero(n);
  double rhs = total;
  for (int i = 0; i < n; ++i)
    if (!side[i]) rhs -= instance_.capacity[i];
  for (int j = 0; j < m; ++j)
    if (side[n + j]) rhs -= instance_.demand[j];
  for (int i = 0; i < n; ++i) {
    if (!side[i]) continue;
    for (int j = 0; j < m; ++j)
      if (!side[n + j]) cut.coefficients[i] += cap(i, j);
  }
  cut.constant = rhs;
  cut.generated_at = z;
  *cut_if_not = cut;
  return false;
}

SubproblemResult FacilityOracle::eval(const Eigen::VectorXd& z, bool binary) const {
  const int n = num_binaries();
  const int m = static_cast<int>(instance_.demand.size());
  const double total = instance_.demand.sum();

  const double open_tol = reg_.is_ridge() ? kRidgeOpenTol : kOpenTol;
  std::vector<int> open;
  for (int i = 0; i < n; ++i)
    if (z[i] > open_tol) open.push_back(i);

  double open_capacity = 0.0;
  for (int i : open) open_capacity += instance_.capacity[i];

  // Binary points and the ridge relaxation keep the full arc caps, so joint
  // feasibility reduces to aggregate capacity. Scaled caps under big-M need
  // the max-flow test.
  if (binary || reg_.is_ridge()) {
    if (open_capacity < total - kDemandTol) return infeasible_capacity(z, binary);
  } else {
    Cut cut;
    if (!routable(z, &cut)) {
      SubproblemResult res;
      res.status = SubproblemStatus::Infeasible;
      res.infeasibility_cut_kind = InfeasibilityCutKind::Monotone;
      res.x_star = Eigen::VectorXd::Zero(n * m);
      res.alpha_star = res.x_star;
      res.cut = cut;
      return res;
    }
  }

  const int s = static_cast<int>(open.size());
  const int cols = s * m;
  const auto col = [m](int a, int j) { return a * m + j; };

  // Shared row/bound assembly for the LP (big-M) and QP (ridge) paths.
  Eigen::MatrixXd A_eq = Eigen::MatrixXd::Zero(m, cols);
  Eigen::MatrixXd C_in = Eigen::MatrixXd::Zero(s, cols);
  for (int a = 0; a < s; ++a)
    for (int j = 0; j < m; ++j) {
      A_eq(j, col(a, j)) = 1.0;
      C_in(a, col(a, j)) = 1.0;
    }
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(cols);
  Eigen::VectorXd hi(cols);
  Eigen::VectorXd cost(cols);
  for (int a = 0; a < s; ++a)
    for (int j = 0; j < m; ++j) {
      const int i = open[a];
      cost[col(a, j)] = instance_.transport(i, j);
      hi[col(a, j)] = reg_.is_big_m() ? cap(i, j) * z[i] : cap(i, j);
    }

  KernelSolution sol;
  if (reg_.is_big_m()) {
    LinearProgram lp = LinearProgram::make(cols);
    lp.c = cost;
    lp.A_eq = A_eq;
    lp.b_eq = instance_.demand;
    lp.C_in = C_in;
    lp.g_in = Eigen::VectorXd::Zero(s);
    for (int a = 0; a < s; ++a) lp.g_in[a] = instance_.capacity[open[a]];
    lp.lo = lo;
    lp.hi = hi;
    sol = simplex_solve(lp, 1e-9);
  } else {
    QuadraticProgram qp = QuadraticProgram::make(cols);
    qp.d = cost;
    for (int a = 0; a < s; ++a)
      for (int j = 0; j < m; ++j)
        qp.Q(col(a, j), col(a, j)) = 1.0 / (reg_.gamma() * z[open[a]]);
    qp.A_eq = A_eq;
    qp.b_eq = instance_.demand;
    qp.C_in = C_in;
    qp.g_in = Eigen::VectorXd::Zero(s);
    for (int a = 0; a < s; ++a) qp.g_in[a] = instance_.capacity[open[a]];
    qp.lo = lo;
    qp.hi = hi;
    sol = qp_solve(qp, 1e-9);
  }
  if (sol.status != KernelStatus::Optimal)
    throw std::runtime_error("facility: transportation kernel did not converge");

  SubproblemResult res;
  res.status = SubproblemStatus::Feasible;
  res.f_value = sol.objective;
  res.x_star = Eigen::VectorXd::Zero(n * m);
  res.alpha_star = Eigen::VectorXd::Zero(n * m);
  for (int a = 0; a < s; ++a)
    for (int j = 0; j < m; ++j) res.x_star[open[a] * m + j] = sol.x[col(a, j)];

  // Coupling duals per arc: the scaled-cap multiplier (big-M) or the shipment
  // marginal x/(gamma z) (ridge) on open facilities; on closed facilities the
  // clamped reduced cost c_ij - v_j, the marginal value of allowing x_ij > 0.
  std::vector<char> is_open(n, 0);
  for (int i : open) is_open[i] = 1;
  for (int a = 0; a < s; ++a) {
    const int i = open[a];
    for (int j = 0; j < m; ++j) {
      const int k = col(a, j);
      if (reg_.is_ridge())
        res.alpha_star[i * m + j] = sol.x[k] / (reg_.gamma() * z[i]);
      else
        res.alpha_star[i * m + j] = std::min(sol.reduced_costs[k], 0.0);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (is_open[i]) continue;
    for (int j = 0; j < m; ++j)
      res.alpha_star[i * m + j] = std::min(instance_.transport(i, j) - sol.eq_duals[j], 0.0);
  }

  // Per-facility cut coefficients: the big-M conjugate prices the whole cap
  // band cap_ij * z_i, the ridge conjugate is quadratic in the arc dual.
  res.cut.origin = CutOrigin::Optimality;
  res.cut.coefficients = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    double coeff = 0.0;
    for (int j = 0; j < m; ++j) {
      const double a = res.alpha_star[i * m + j];
      coeff -= reg_.is_big_m() ? cap(i, j) * std::abs(a) : reg_.conjugate(a);
    }
    res.cut.coefficients[i] = coeff;
  }
  res.cut.constant = res.f_value - res.cut.coefficients.dot(z);
  res.cut.generated_at = z;
  return res;
}

}  // namespace logicut
