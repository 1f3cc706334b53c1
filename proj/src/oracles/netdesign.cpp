#include "logicut/oracles/netdesign.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "logicut/lp.hpp"
#include "logicut/maxflow.hpp"
#include "logicut/qp.hpp"

namespace logicut {

namespace {
// Big-M caps stay meaningful down to tiny z; the ridge perspective diagonal
// 1/(gamma z) is kept conditioned by treating near-zero coordinates as closed.
constexpr double kOpenTol = 1e-9;
constexpr double kRidgeOpenTol = 1e-7;
constexpr double kRouteTol = 1e-7;
}

NetdesignOracle::NetdesignOracle(NetdesignInstance instance, Regularizer reg)
    : instance_(std::move(instance)), reg_(reg) {
  const int N = instance_.num_nodes;
  const int E = static_cast<int>(instance_.edges.size());
  if (N < 2) throw std::invalid_argument("netdesign: need at least two nodes");
  if (E <= 0) throw std::invalid_argument("netdesign: no edges");
  for (const auto& e : instance_.edges) {
    if (e.tail < 0 || e.tail >= N || e.head < 0 || e.head >= N || e.tail == e.head)
      throw std::invalid_argument("netdesign: bad edge endpoints");
  }
  if (instance_.Q.rows() != E || instance_.Q.cols() != E)
    throw std::invalid_argument("netdesign: Q dimension mismatch");
  if ((instance_.Q - instance_.Q.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("netdesign: Q must be symmetric");
  if (instance_.d.size() != E || instance_.u.size() != E)
    throw std::invalid_argument("netdesign: cost/capacity dimension mismatch");
  // Nonnegative linear costs keep idle two-arc circulations unprofitable.
  for (int e = 0; e < E; ++e)
    if (instance_.d[e] < 0.0)
      throw std::invalid_argument("netdesign: linear costs must be nonnegative");
  if (instance_.penalty < 0.0)
    throw std::invalid_argument("netdesign: capacity penalty must be nonnegative");
  if (instance_.b.rows() != N || instance_.b.cols() < 1)
    throw std::invalid_argument("netdesign: demand matrix dimension mismatch");
  for (int j = 0; j < instance_.b.cols(); ++j) {
    const double imbalance = std::abs(instance_.b.col(j).sum());
    if (imbalance > 1e-9 * (1.0 + instance_.b.col(j).cwiseAbs().sum()))
      throw std::invalid_argument("netdesign: commodity demands must balance");
    for (int v = 0; v < N; ++v)
      if (instance_.b(v, j) > 0.0) total_supply_ += instance_.b(v, j);
  }
  if (total_supply_ <= 0.0)
    throw std::invalid_argument("netdesign: no demand to route");
  // The edge caps M z_e define the subproblem; an M below the total demand
  // would make them bind even with everything open, which the routability
  // screen does not model.
  if (reg_.is_big_m() && reg_.M() < total_supply_ - 1e-9)
    throw std::invalid_argument("netdesign: big-M constant must cover the total demand");

  Cut unused;
  if (!commodities_routable(Eigen::VectorXd::Ones(E), false, &unused))
    throw std::invalid_argument("netdesign: full graph cannot route the demand");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(instance_.Q);
  h_supported_ = es.eigenvalues().minCoeff() > 1e-10;
}

SubproblemResult NetdesignOracle::evaluate(const std::vector<int>& z) const {
  require_binary(z, num_binaries());
  return eval(to_vector(z), true);
}

SubproblemResult NetdesignOracle::evaluate_fractional(const Eigen::VectorXd& z) const {
  require_unit_box(z, num_binaries());
  bool binary = true;
  for (int i = 0; i < z.size(); ++i)
    if (z[i] > kOpenTol && z[i] < 1.0 - kOpenTol) binary = false;
  return eval(z, binary);
}

// Per-commodity max-flow screen. With scaled caps (fractional big-M) the arc
// capacity is M z_e; otherwise open edges are uncapacitated, so a failed cut
// crosses only closed edges. Either way the min cut yields a valid capacity
// inequality that the current point violates.
bool NetdesignOracle::commodities_routable(const Eigen::VectorXd& z, bool scaled_caps,
                                           Cut* cut_if_not) const {
  const int N = instance_.num_nodes;
  const int E = num_binaries();
  const double open_tol = (!scaled_caps && reg_.is_ridge()) ? kRidgeOpenTol : kOpenTol;

  for (int j = 0; j < instance_.b.cols(); ++j) {
    double need = 0.0;
    for (int v = 0; v < N; ++v)
      if (instance_.b(v, j) > 0.0) need += instance_.b(v, j);
    if (need <= 0.0) continue;

    MaxflowGraph graph(N + 2);
    const int source = N, sink = N + 1;
    for (int v = 0; v < N; ++v) {
      if (instance_.b(v, j) > 0.0) graph.add_arc(source, v, instance_.b(v, j));
      if (instance_.b(v, j) < 0.0) graph.add_arc(v, sink, -instance_.b(v, j));
    }
    for (int e = 0; e < E; ++e) {
      if (z[e] <= open_tol) continue;
      const double cap = scaled_caps ? reg_.M() * z[e] : total_supply_;
      graph.add_arc(instance_.edges[e].tail, instance_.edges[e].head, cap);
      graph.add_arc(instance_.edges[e].head, instance_.edges[e].tail, cap);
    }
    const double value = graph.solve(source, sink);
    if (value >= need - kRouteTol * (1.0 + need)) continue;

    const std::vector<char>& side = graph.source_side();
    Cut cut;
    cut.origin = CutOrigin::Feasibility;
    cut.coefficients = Eigen::VectorXd::Zero(E);
    double rhs = need;
    for (int v = 0; v < N; ++v) {
      if (instance_.b(v, j) > 0.0 && !side[v]) rhs -= instance_.b(v, j);
      if (instance_.b(v, j) < 0.0 && side[v]) rhs += instance_.b(v, j);
    }
    for (int e = 0; e < E; ++e) {
      const bool tail_in = side[instance_.edges[e].tail];
      const bool head_in = side[instance_.edges[e].head];
      if (tail_in == head_in) continue;
      cut.coefficients[e] = scaled_caps ? reg_.M() : 1.0;
    }
    if (!scaled_caps) rhs = 1.0;  // some crossing edge must open
    cut.constant = rhs;
    cut.generated_at = z;
    *cut_if_not = cut;
    return false;
  }
  return true;
}

// Joint feasibility restoration value V(z) = min sum of cap overshoots over
// all commodities together, solved as one LP; its capacity-row duals give the
// Benders inequality sum_e M mu_e z'_e >= V(z) + sum_e M mu_e z_e.
SubproblemResult NetdesignOracle::joint_capacity_cut(const Eigen::VectorXd& z) const {
  const int N = instance_.num_nodes;
  const int E = num_binaries();
  const int J = static_cast<int>(instance_.b.cols());
  const double M = reg_.M();  // only reached under big-M scaled caps

  const int f0 = 0;
  const int x0 = J * 2 * E;
  const int s0 = x0 + E;
  const int cols = s0 + E;

  LinearProgram lp = LinearProgram::make(cols);
  lp.lo.setZero();
  for (int e = 0; e < E; ++e) lp.c[s0 + e] = 1.0;
  lp.A_eq = Eigen::MatrixXd::Zero(J * N + E, cols);
  lp.b_eq = Eigen::VectorXd::Zero(J * N + E);
  for (int j = 0; j < J; ++j) {
    for (int e = 0; e < E; ++e) {
      const int a0 = f0 + j * 2 * E + 2 * e;
      const auto& ed = instance_.edges[e];
      lp.A_eq(j * N + ed.tail, a0) += 1.0;
      lp.A_eq(j * N + ed.head, a0) -= 1.0;
      lp.A_eq(j * N + ed.head, a0 + 1) += 1.0;
      lp.A_eq(j * N + ed.tail, a0 + 1) -= 1.0;
      lp.A_eq(J * N + e, a0) = 1.0;
      lp.A_eq(J * N + e, a0 + 1) = 1.0;
    }
    for (int v = 0; v < N; ++v) lp.b_eq[j * N + v] = instance_.b(v, j);
  }
  for (int e = 0; e < E; ++e) lp.A_eq(J * N + e, x0 + e) = -1.0;
  lp.C_in = Eigen::MatrixXd::Zero(E, cols);
  lp.g_in = Eigen::VectorXd::Zero(E);
  for (int e = 0; e < E; ++e) {
    lp.C_in(e, x0 + e) = 1.0;
    lp.C_in(e, s0 + e) = -1.0;
    lp.g_in[e] = M * z[e];
  }

  KernelSolution sol = simplex_solve(lp, 1e-9);
  if (sol.status != KernelStatus::Optimal || sol.objective <= 1e-7)
    throw std::runtime_error("netdesign: flow kernel disagreed with capacity check");

  SubproblemResult res;
  res.status = SubproblemStatus::Infeasible;
  res.infeasibility_cut_kind = InfeasibilityCutKind::Monotone;
  res.x_star = Eigen::VectorXd::Zero(E);
  res.alpha_star = Eigen::VectorXd::Zero(E);
  res.cut.origin = CutOrigin::Feasibility;
  res.cut.coefficients.resize(E);
  for (int e = 0; e < E; ++e) res.cut.coefficients[e] = M * sol.ineq_duals[e];
  res.cut.constant = sol.objective + res.cut.coefficients.dot(z);
  res.cut.generated_at = z;
  return res;
}

KernelSolution NetdesignOracle::solve_flow(const std::vector<int>& open,
                                           const Eigen::VectorXd& x_hi,
                                           const Eigen::VectorXd& x_quad_extra,
                                           const Eigen::VectorXd& x_lin,
                                           FlowLayout* layout) const {
  const int N = instance_.num_nodes;
  const int J = static_cast<int>(instance_.b.cols());
  const int s = static_cast<int>(open.size());

  layout->open = open;
  layout->num_commodities = J;
  layout->has_t = instance_.penalty > 0.0;
  layout->x0 = J * 2 * s;
  layout->t0 = layout->x0 + s;
  layout->cols = layout->t0 + (layout->has_t ? s : 0);

  QuadraticProgram qp = QuadraticProgram::make(layout->cols);
  for (int a = 0; a < s; ++a) {
    for (int c = 0; c < s; ++c) qp.Q(layout->x0 + a, layout->x0 + c) = instance_.Q(open[a], open[c]);
    qp.Q(layout->x0 + a, layout->x0 + a) += x_quad_extra[a];
    qp.d[layout->x0 + a] = x_lin[a];
    qp.lo[layout->x0 + a] = 0.0;
    qp.hi[layout->x0 + a] = x_hi[a];
    if (layout->has_t) {
      qp.d[layout->t0 + a] = instance_.penalty;
      qp.lo[layout->t0 + a] = 0.0;
    }
  }
  for (int j = 0; j < J; ++j)
    for (int a = 0; a < 2 * s; ++a) qp.lo[j * 2 * s + a] = 0.0;

  qp.A_eq = Eigen::MatrixXd::Zero(J * N + s, layout->cols);
  qp.b_eq = Eigen::VectorXd::Zero(J * N + s);
  for (int j = 0; j < J; ++j) {
    for (int a = 0; a < s; ++a) {
      const auto& ed = instance_.edges[open[a]];
      const int c0 = layout->flow_col(j, a, 0);
      qp.A_eq(j * N + ed.tail, c0) += 1.0;
      qp.A_eq(j * N + ed.head, c0) -= 1.0;
      qp.A_eq(j * N + ed.head, c0 + 1) += 1.0;
      qp.A_eq(j * N + ed.tail, c0 + 1) -= 1.0;
      qp.A_eq(J * N + a, c0) = 1.0;
      qp.A_eq(J * N + a, c0 + 1) = 1.0;
    }
    for (int v = 0; v < N; ++v) qp.b_eq[j * N + v] = instance_.b(v, j);
  }
  for (int a = 0; a < s; ++a) qp.A_eq(J * N + a, layout->x0 + a) = -1.0;

  if (layout->has_t) {
    qp.C_in = Eigen::MatrixXd::Zero(s, layout->cols);
    qp.g_in.resize(s);
    for (int a = 0; a < s; ++a) {
      qp.C_in(a, layout->x0 + a) = 1.0;
      qp.C_in(a, layout->t0 + a) = -1.0;
      qp.g_in[a] = instance_.u[open[a]];
    }
  }
  return qp_solve(qp, 1e-9);
}

SubproblemResult NetdesignOracle::eval(const Eigen::VectorXd& z, bool binary) const {
  const int N = instance_.num_nodes;
  const int E = num_binaries();
  const int J = static_cast<int>(instance_.b.cols());
  const double open_tol = reg_.is_ridge() ? kRidgeOpenTol : kOpenTol;
  const bool scaled_caps = reg_.is_big_m() && !binary;

  Cut infeas_cut;
  if (!commodities_routable(z, scaled_caps, &infeas_cut)) {
    // Unscaled caps (binary or ridge): the violated min cut crosses closed
    // edges only, so the cut is the monotone inequality restricted to them.
    SubproblemResult res;
    res.status = SubproblemStatus::Infeasible;
    res.infeasibility_cut_kind = InfeasibilityCutKind::Monotone;
    res.x_star = Eigen::VectorXd::Zero(E);
    res.alpha_star = Eigen::VectorXd::Zero(E);
    res.cut = infeas_cut;
    return res;
  }

  std::vector<int> open;
  for (int e = 0; e < E; ++e)
    if (z[e] > open_tol) open.push_back(e);
  const int s = static_cast<int>(open.size());

  SubproblemResult res;
  res.status = SubproblemStatus::Feasible;
  res.x_star = Eigen::VectorXd::Zero(E);
  res.alpha_star = Eigen::VectorXd::Zero(E);

  Eigen::VectorXd p = Eigen::VectorXd::Zero(J * N);
  Eigen::VectorXd rc_x = Eigen::VectorXd::Zero(s);
  if (s > 0) {
    Eigen::VectorXd x_hi(s), extra(s), lin(s);
    for (int a = 0; a < s; ++a) {
      x_hi[a] = reg_.is_big_m() ? reg_.M() * z[open[a]] : kInf;
      extra[a] = reg_.is_ridge() ? 1.0 / (reg_.gamma() * z[open[a]]) : 0.0;
      lin[a] = instance_.d[open[a]];
    }
    FlowLayout layout;
    KernelSolution sol = solve_flow(open, x_hi, extra, lin, &layout);
    if (sol.status == KernelStatus::Infeasible && scaled_caps)
      return joint_capacity_cut(z);
    if (sol.status != KernelStatus::Optimal)
      throw std::runtime_error("netdesign: flow kernel did not converge");
    res.f_value = sol.objective;
    for (int a = 0; a < s; ++a) {
      res.x_star[open[a]] = sol.x[layout.x0 + a];
      rc_x[a] = sol.reduced_costs[layout.x0 + a];
    }
    p = sol.eq_duals.head(J * N);
  } else {
    res.f_value = 0.0;  // routable with nothing open means zero demand
  }

  // Open-edge duals from the cap multiplier (big-M) or the perspective
  // marginal (ridge); closed edges price the cheapest entering arc over all
  // commodities and orientations against the node potentials.
  std::vector<char> is_open(E, 0);
  for (int e : open) is_open[e] = 1;
  for (int a = 0; a < s; ++a) {
    const int e = open[a];
    res.alpha_star[e] = reg_.is_ridge() ? res.x_star[e] / (reg_.gamma() * z[e])
                                        : std::min(rc_x[a], 0.0);
  }
  const Eigen::VectorXd qx = instance_.Q * res.x_star;
  for (int e = 0; e < E; ++e) {
    if (is_open[e]) continue;
    double mc = instance_.d[e] + qx[e];
    if (instance_.penalty > 0.0 && instance_.u[e] < 1e-12) mc += instance_.penalty;
    double best_gain = 0.0;
    for (int j = 0; j < J; ++j) {
      const double dp =
          p[j * N + instance_.edges[e].tail] - p[j * N + instance_.edges[e].head];
      best_gain = std::max(best_gain, std::abs(dp));
    }
    res.alpha_star[e] = std::min(0.0, mc - best_gain);
  }

  res.cut.origin = CutOrigin::Optimality;
  res.cut.coefficients.resize(E);
  for (int e = 0; e < E; ++e) res.cut.coefficients[e] = -reg_.conjugate(res.alpha_star[e]);
  res.cut.constant = res.f_value - res.cut.coefficients.dot(z);
  res.cut.generated_at = z;
  return res;
}

Oracle::HEval NetdesignOracle::h_eval(const Eigen::VectorXd& alpha) const {
  if (!h_supported_) throw std::logic_error("netdesign: h oracle needs positive definite Q");
  const int E = num_binaries();
  if (alpha.size() != E) throw std::invalid_argument("netdesign: alpha dimension mismatch");

  std::vector<int> all(E);
  for (int e = 0; e < E; ++e) all[e] = e;
  Eigen::VectorXd x_hi = Eigen::VectorXd::Constant(E, kInf);
  Eigen::VectorXd extra = Eigen::VectorXd::Zero(E);
  Eigen::VectorXd lin = instance_.d - alpha;

  FlowLayout layout;
  KernelSolution sol = solve_flow(all, x_hi, extra, lin, &layout);
  if (sol.status != KernelStatus::Optimal)
    throw std::runtime_error("netdesign: h oracle flow solve failed");

  HEval out;
  out.value = sol.objective;
  out.minimizer = sol.x.segment(layout.x0, E);
  return out;
}

}  // namespace logicut
