#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "logicut/cut.hpp"
#include "logicut/feasible_set.hpp"
#include "logicut/oracle.hpp"

namespace logicut {

enum class SolveMode { SingleTree, MultiTree };
enum class SolveStatus { Optimal, GapLimit, TimeLimit, Infeasible };

struct SolverConfig {
  double eps = 1e-6;          // relative gap tolerance
  double time_limit = kInf;   // seconds; +inf = no limit
  SolveMode mode = SolveMode::SingleTree;
  long node_limit = 1000000;  // branch-and-bound nodes (summed over restarts)
  bool use_relaxation_warmstart = true;
  bool use_heuristics = true;
  std::uint64_t seed = 0;
};

// One branch-and-bound node: coordinates forced off / on relative to the
// feasible box, the LP bound inherited from the parent, and the depth.
struct Node {
  std::vector<int> fixed_zero;
  std::vector<int> fixed_one;
  double parent_bound = -kInf;
  int depth = 0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<int> incumbent_z;
  Eigen::VectorXd incumbent_x;
  double upper_bound = kInf;
  double lower_bound = -kInf;
  double gap = kInf;  // (ub - lb) / max(1, |ub|); 0 for a proved-empty set
  int cuts_optimality = 0;
  int cuts_feasibility = 0;
  long nodes_explored = 0;
  std::map<std::string, double> stage_timings;  // seconds per stage + "total"
};

// Appends the requested feasibility cut for the binary point z_bad to the
// pool and returns it.
Cut add_feasibility_cut(std::vector<Cut>& pool, const std::vector<int>& z_bad,
                        InfeasibilityCutKind kind);

// Branch-and-cut over min c^T z + f(z), z in Z: best-bound search on the
// epigraph master LP (accumulated cuts + node fixings), branching on the most
// fractional coordinate (lowest index on ties). Integer node solutions are
// checked against the oracle; a violated linearization (f > eta + eps_cut,
// eps_cut = 0.1 * eps * (1 + |f|)) or an infeasibility is added as a lazy cut
// and the node re-solved, otherwise the point becomes the incumbent. Optional
// stages seed the cut pool from the Kelley relaxation and the incumbent from
// the rounding/local-search heuristics. The incumbent is re-verified by a
// fresh oracle call before reporting.
SolveReport solve_singletree(const Oracle& oracle, const FeasibleSet& feasible,
                             const Eigen::VectorXd& c, const SolverConfig& config = {},
                             const std::vector<Cut>& initial_cuts = {},
                             const std::optional<std::vector<int>>& incumbent_hint = std::nullopt);

// Iterated outer approximation: each round solves the current cut master to
// binary optimality with no lazy cuts (a plain branch-and-bound on the static
// pool), evaluates the oracle at the winner z^t, adds its cut, and stops once
// f(z^t) - eta^t <= eps * (1 + |incumbent|).
SolveReport solve_multitree(const Oracle& oracle, const FeasibleSet& feasible,
                            const Eigen::VectorXd& c, const SolverConfig& config = {});

// Dispatch on config.mode.
SolveReport solve(const Oracle& oracle, const FeasibleSet& feasible, const Eigen::VectorXd& c,
                  const SolverConfig& config = {});

}  // namespace logicut
