#include "logicut/master.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <utility>

#include "logicut/heuristics.hpp"
#include "logicut/lp.hpp"
#include "logicut/relaxation.hpp"

namespace logicut {

namespace {

constexpr double kEtaFloor = -1e12;
constexpr double kIntTol = 1e-6;
constexpr double kPruneTol = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::VectorXd to_vec(const std::vector<int>& z) {
  Eigen::VectorXd v(z.size());
  for (size_t i = 0; i < z.size(); ++i) v[i] = z[i];
  return v;
}

double relative_gap(double ub, double lb) {
  if (ub == kInf || lb == -kInf) return kInf;
  return (ub - lb) / std::max(1.0, std::abs(ub));
}

// Node relaxation over (z, eta): Bool(Z) tightened by the node fixings, the
// budget row, and one row per pooled cut. eta keeps a deep floor so the LP
// is bounded before any optimality cut exists.
LinearProgram build_node_lp(const FeasibleSet& feasible, const Eigen::VectorXd& c,
                            const std::vector<Cut>& pool, const std::vector<int>& lo,
                            const std::vector<int>& hi) {
  const int n = feasible.n();
  LinearProgram lp = LinearProgram::make(n + 1);
  lp.c.head(n) = c;
  lp.c[n] = 1.0;
  for (int i = 0; i < n; ++i) {
    lp.lo[i] = lo[i];
    lp.hi[i] = hi[i];
  }
  lp.lo[n] = kEtaFloor;
  lp.hi[n] = kInf;

  const int budget_rows = feasible.cardinality() ? 1 : 0;
  const int rows = budget_rows + static_cast<int>(pool.size());
  lp.C_in = Eigen::MatrixXd::Zero(rows, n + 1);
  lp.g_in = Eigen::VectorXd::Zero(rows);
  int r = 0;
  if (feasible.cardinality()) {
    lp.C_in.row(r).head(n).setOnes();
    lp.g_in[r] = *feasible.cardinality();
    ++r;
  }
  for (const Cut& cut : pool) {
    if (cut.origin == CutOrigin::Optimality) {
      lp.C_in.row(r).head(n) = cut.coefficients;
      lp.C_in(r, n) = -1.0;
      lp.g_in[r] = -cut.constant;
    } else {
      lp.C_in.row(r).head(n) = -cut.coefficients;
      lp.g_in[r] = -cut.constant;
    }
    ++r;
  }
  return lp;
}

struct QNode {
  double bound = -kInf;
  long seq = 0;
  int depth = 0;
  std::vector<int> lo;
  std::vector<int> hi;
  std::vector<VarStatus> basis;
};

struct QNodeCmp {
  bool operator()(const QNode& a, const QNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;                              // then FIFO
  }
};

struct TreeParams {
  const Oracle* oracle = nullptr;
  const FeasibleSet* feasible = nullptr;
  const Eigen::VectorXd* c = nullptr;
  std::vector<Cut>* pool = nullptr;
  bool lazy = true;
  double gap_eps = 1e-6;
  double cut_eps_base = 1e-6;  // eps_cut = 0.1 * base * (1 + |f|)
  long node_budget = 1000000;
  Clock::time_point start;
  double time_limit = kInf;
};

struct TreeState {
  double ub = kInf;
  std::vector<int> incumbent;
  double incumbent_eta = -kInf;
  double lb = -kInf;
  long nodes = 0;
  bool hit_time = false;
  bool hit_nodes = false;
};

// Best-bound branch and bound on the cut master. With lazy cuts enabled,
// integer nodes are certified against the oracle and re-solved after each
// added cut; otherwise they are accepted at the LP objective (static-pool
// binary solve used by the multi-tree rounds).
void run_tree(const TreeParams& P, TreeState& st) {
  const int n = P.feasible->n();
  std::priority_queue<QNode, std::vector<QNode>, QNodeCmp> open;
  long seq = 0;
  open.push({-kInf, seq++, 0, P.feasible->lower(), P.feasible->upper(), {}});

  while (!open.empty()) {
    st.lb = std::min(open.top().bound, st.ub);
    if (relative_gap(st.ub, st.lb) <= P.gap_eps) return;
    if (seconds_since(P.start) > P.time_limit) {
      st.hit_time = true;
      return;
    }
    if (st.nodes >= P.node_budget) {
      st.hit_nodes = true;
      return;
    }

    QNode node = open.top();
    open.pop();
    if (node.bound >= st.ub - kPruneTol) continue;
    ++st.nodes;

    std::vector<VarStatus> basis = std::move(node.basis);
    for (int resolves = 0;; ++resolves) {
      if (resolves > 10000)
        throw std::runtime_error("branch-and-cut: node re-solve loop did not settle");
      LinearProgram lp = build_node_lp(*P.feasible, *P.c, *P.pool, node.lo, node.hi);
      SimplexOptions opts;
      if (!basis.empty()) opts.warm_start = &basis;
      KernelSolution sol = simplex_solve(lp, opts);
      if (sol.status == KernelStatus::Infeasible) break;  // prune
      if (sol.status != KernelStatus::Optimal)
        throw std::runtime_error("branch-and-cut: node relaxation did not solve");
      basis = sol.var_status;
      if (sol.objective >= st.ub - kPruneTol) break;  // prune by bound

      int branch = -1;
      double most = kIntTol;
      for (int i = 0; i < n; ++i) {
        if (node.lo[i] >= node.hi[i]) continue;
        const double frac = std::min(sol.x[i], 1.0 - sol.x[i]);
        if (frac > most) {
          most = frac;
          branch = i;
        }
      }

      if (branch < 0) {
        std::vector<int> zi(n);
        for (int i = 0; i < n; ++i)
          zi[i] = std::clamp(static_cast<int>(std::lround(sol.x[i])), node.lo[i], node.hi[i]);
        const double eta_hat = sol.x[n];

        if (!P.lazy) {
          if (sol.objective < st.ub) {
            st.ub = sol.objective;
            st.incumbent = zi;
            st.incumbent_eta = eta_hat;
          }
          break;
        }

        SubproblemResult res = P.oracle->evaluate(zi);
        if (res.status != SubproblemStatus::Feasible) {
          P.pool->push_back(res.cut);
          continue;  // lazy feasibility cut, re-solve the node
        }
        const double eps_cut = 0.1 * P.cut_eps_base * (1.0 + std::abs(res.f_value));
        if (res.f_value > eta_hat + eps_cut) {
          P.pool->push_back(res.cut);
          continue;  // lazy optimality cut, re-solve the node
        }
        const double value = P.c->dot(to_vec(zi)) + res.f_value;
        if (value < st.ub) {
          st.ub = value;
          st.incumbent = zi;
          st.incumbent_eta = eta_hat;
        }
        break;
      }

      QNode down{sol.objective, seq++, node.depth + 1, node.lo, node.hi, basis};
      down.hi[branch] = 0;
      QNode up{sol.objective, seq++, node.depth + 1, node.lo, node.hi, std::move(basis)};
      up.lo[branch] = 1;
      open.push(std::move(down));
      open.push(std::move(up));
      break;
    }
  }
  st.lb = st.ub;  // tree exhausted, bound closed
}

struct StagePrep {
  std::vector<Cut> pool;
  double relax_lb = -kInf;
  bool relax_infeasible = false;
  double ub = kInf;
  std::vector<int> incumbent;
  double time_relaxation = 0.0;
  double time_heuristics = 0.0;
};

// Optional warm-start stages shared by both solve modes: the Kelley
// relaxation contributes its cut pool and lower bound, the rounding plus
// local-search pipeline contributes an incumbent.
StagePrep run_stages(const Oracle& oracle, const FeasibleSet& feasible,
                     const Eigen::VectorXd& c, const SolverConfig& config) {
  const int n = feasible.n();
  StagePrep prep;
  Eigen::VectorXd z_seed;

  if (config.use_relaxation_warmstart) {
    const auto t0 = Clock::now();
    RelaxationResult rr = kelley_solve(oracle, feasible, c);
    prep.time_relaxation = seconds_since(t0);
    if (rr.lower_bound == kInf) {
      prep.relax_infeasible = true;
      return prep;
    }
    prep.pool = std::move(rr.cut_pool);
    prep.relax_lb = rr.lower_bound;
    if (rr.z_frac.size() == n) z_seed = rr.z_frac;
  }

  if (config.use_heuristics) {
    const auto t0 = Clock::now();
    if (z_seed.size() != n) {
      // Box midpoint, scaled onto the budget so Bernoulli draws start close
      // to feasible.
      z_seed.resize(n);
      double forced = 0.0, free_mass = 0.0;
      for (int i = 0; i < n; ++i) {
        z_seed[i] = std::clamp(0.5, double(feasible.lower()[i]), double(feasible.upper()[i]));
        if (feasible.lower()[i] == 1)
          forced += 1.0;
        else
          free_mass += z_seed[i];
      }
      if (feasible.cardinality() && forced + free_mass > *feasible.cardinality() &&
          free_mass > 0.0) {
        const double scale =
            std::max(0.0, (*feasible.cardinality() - forced)) / free_mass;
        for (int i = 0; i < n; ++i)
          if (feasible.lower()[i] == 0) z_seed[i] *= scale;
      }
    }
    HeuristicResult best = randomized_rounding(z_seed, feasible, oracle, c, 20, config.seed);
    HeuristicResult seq = sequential_rounding(z_seed, feasible, oracle, c);
    if (seq.ub < best.ub) best = std::move(seq);
    if (!best.z_best.empty() && best.ub < kInf) {
      HeuristicResult polished = local_search(best.z_best, feasible, oracle, c);
      if (polished.ub < best.ub) best = std::move(polished);
    }
    if (best.ub < prep.ub) {
      prep.ub = best.ub;
      prep.incumbent = best.z_best;
    }
    prep.time_heuristics = seconds_since(t0);
  }
  return prep;
}

void count_cuts(const std::vector<Cut>& pool, SolveReport& report) {
  report.cuts_optimality = 0;
  report.cuts_feasibility = 0;
  for (const Cut& cut : pool) {
    if (cut.origin == CutOrigin::Optimality)
      ++report.cuts_optimality;
    else
      ++report.cuts_feasibility;
  }
}

// Re-verify the incumbent with a fresh oracle call and fill the value/gap
// fields. lower is clamped to the verified upper bound.
void finalize(const Oracle& oracle, const Eigen::VectorXd& c, const std::vector<int>& inc,
              double lower, SolveReport& report) {
  if (inc.empty()) {
    report.upper_bound = kInf;
    report.lower_bound = lower;
    report.gap = report.status == SolveStatus::Infeasible ? 0.0 : kInf;
    return;
  }
  SubproblemResult verify = oracle.evaluate(inc);
  if (verify.status != SubproblemStatus::Feasible)
    throw std::runtime_error("solver: incumbent failed re-verification");
  report.incumbent_z = inc;
  report.incumbent_x = verify.x_star;
  report.upper_bound = c.dot(to_vec(inc)) + verify.f_value;
  report.lower_bound = std::min(lower, report.upper_bound);
  report.gap = std::max(0.0, relative_gap(report.upper_bound, report.lower_bound));
}

}  // namespace

Cut add_feasibility_cut(std::vector<Cut>& pool, const std::vector<int>& z_bad,
                        InfeasibilityCutKind kind) {
  Cut cut = kind == InfeasibilityCutKind::Exclusion ? make_exclusion_cut(z_bad)
                                                    : make_monotone_cut(z_bad);
  pool.push_back(cut);
  return cut;
}

SolveReport solve_singletree(const Oracle& oracle, const FeasibleSet& feasible,
                             const Eigen::VectorXd& c, const SolverConfig& config,
                             const std::vector<Cut>& initial_cuts,
                             const std::optional<std::vector<int>>& incumbent_hint) {
  if (c.size() != feasible.n() || oracle.num_binaries() != feasible.n())
    throw std::invalid_argument("solve_singletree: dimension mismatch");
  const auto t0 = Clock::now();

  SolveReport report;
  StagePrep prep = run_stages(oracle, feasible, c, config);
  report.stage_timings["relaxation"] = prep.time_relaxation;
  report.stage_timings["heuristics"] = prep.time_heuristics;
  if (prep.relax_infeasible) {
    report.status = SolveStatus::Infeasible;
    report.lower_bound = kInf;
    report.upper_bound = kInf;
    report.gap = 0.0;
    report.stage_timings["tree"] = 0.0;
    report.stage_timings["total"] = seconds_since(t0);
    return report;
  }

  std::vector<Cut> pool = initial_cuts;
  pool.insert(pool.end(), prep.pool.begin(), prep.pool.end());

  TreeState st;
  st.ub = prep.ub;
  st.incumbent = prep.incumbent;
  if (incumbent_hint && feasible.contains(*incumbent_hint)) {
    SubproblemResult hint = oracle.evaluate(*incumbent_hint);
    if (hint.status == SubproblemStatus::Feasible) {
      const double value = c.dot(to_vec(*incumbent_hint)) + hint.f_value;
      if (value < st.ub) {
        st.ub = value;
        st.incumbent = *incumbent_hint;
      }
    }
  }

  TreeParams params;
  params.oracle = &oracle;
  params.feasible = &feasible;
  params.c = &c;
  params.pool = &pool;
  params.lazy = true;
  params.gap_eps = config.eps;
  params.cut_eps_base = config.eps;
  params.node_budget = config.node_limit;
  params.start = t0;
  params.time_limit = config.time_limit;

  const auto t_tree = Clock::now();
  run_tree(params, st);
  report.stage_timings["tree"] = seconds_since(t_tree);
  report.nodes_explored = st.nodes;
  count_cuts(pool, report);

  if (st.hit_time)
    report.status = SolveStatus::TimeLimit;
  else if (st.hit_nodes)
    report.status = SolveStatus::GapLimit;
  else if (st.incumbent.empty())
    report.status = SolveStatus::Infeasible;
  else
    report.status = SolveStatus::Optimal;

  double lower = std::max(st.lb, prep.relax_lb);
  if (report.status == SolveStatus::Infeasible) lower = kInf;
  finalize(oracle, c, st.incumbent, lower, report);
  report.stage_timings["total"] = seconds_since(t0);
  return report;
}

SolveReport solve_multitree(const Oracle& oracle, const FeasibleSet& feasible,
                            const Eigen::VectorXd& c, const SolverConfig& config) {
  if (c.size() != feasible.n() || oracle.num_binaries() != feasible.n())
    throw std::invalid_argument("solve_multitree: dimension mismatch");
  const auto t0 = Clock::now();

  SolveReport report;
  StagePrep prep = run_stages(oracle, feasible, c, config);
  report.stage_timings["relaxation"] = prep.time_relaxation;
  report.stage_timings["heuristics"] = prep.time_heuristics;
  if (prep.relax_infeasible) {
    report.status = SolveStatus::Infeasible;
    report.lower_bound = kInf;
    report.upper_bound = kInf;
    report.gap = 0.0;
    report.stage_timings["tree"] = 0.0;
    report.stage_timings["total"] = seconds_since(t0);
    return report;
  }

  std::vector<Cut> pool = std::move(prep.pool);
  double ub = prep.ub;
  std::vector<int> incumbent = prep.incumbent;
  double lower = prep.relax_lb;
  long nodes_total = 0;
  bool decided = false;

  const auto t_tree = Clock::now();
  constexpr int kMaxRounds = 10000;
  for (int round = 0; round < kMaxRounds && !decided; ++round) {
    TreeParams params;
    params.oracle = &oracle;
    params.feasible = &feasible;
    params.c = &c;
    params.pool = &pool;
    params.lazy = false;  // static-pool binary solve
    params.gap_eps = 1e-9;
    params.cut_eps_base = config.eps;
    params.node_budget = config.node_limit - nodes_total;
    params.start = t0;
    params.time_limit = config.time_limit;

    TreeState st;
    run_tree(params, st);
    nodes_total += st.nodes;
    if (st.hit_time) {
      report.status = SolveStatus::TimeLimit;
      decided = true;
      break;
    }
    if (st.hit_nodes) {
      report.status = SolveStatus::GapLimit;
      decided = true;
      break;
    }
    if (st.incumbent.empty()) {
      // Feasibility cuts exhausted Z.
      report.status = SolveStatus::Infeasible;
      incumbent.clear();
      lower = kInf;
      decided = true;
      break;
    }

    lower = std::max(lower, st.ub);  // exact master optimum is a global bound
    SubproblemResult res = oracle.evaluate(st.incumbent);
    pool.push_back(res.cut);
    if (res.status != SubproblemStatus::Feasible) continue;

    const double value = c.dot(to_vec(st.incumbent)) + res.f_value;
    if (value < ub) {
      ub = value;
      incumbent = st.incumbent;
    }
    if (res.f_value - st.incumbent_eta <= config.eps * (1.0 + std::abs(ub))) {
      report.status = SolveStatus::Optimal;
      decided = true;
    }
  }
  if (!decided) report.status = SolveStatus::GapLimit;

  report.stage_timings["tree"] = seconds_since(t_tree);
  report.nodes_explored = nodes_total;
  count_cuts(pool, report);
  finalize(oracle, c, incumbent, lower, report);
  report.stage_timings["total"] = seconds_since(t0);
  return report;
}

SolveReport solve(const Oracle& oracle, const FeasibleSet& feasible, const Eigen::VectorXd& c,
                  const SolverConfig& config) {
  return config.mode == SolveMode::SingleTree ? solve_singletree(oracle, feasible, c, config)
                                              : solve_multitree(oracle, feasible, c, config);
}

}  // namespace logicut
