#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "logicut/feasible_set.hpp"
#include "logicut/oracle.hpp"

namespace logicut {

// Outcome of an upper-bound heuristic. z_best is a binary member of Z; ub is
// its objective c^T z_best + f(z_best) re-evaluated by the oracle (+inf when
// the heuristic found no oracle-feasible point). The trace records the first
// evaluated value and every subsequent strict improvement.
struct HeuristicResult {
  struct TracePoint {
    std::vector<int> z;
    double value = 0.0;
  };

  std::vector<int> z_best;
  double ub = kInf;
  int trials_attempted = 0;
  std::vector<TracePoint> improvement_trace;
};

// Independent Bernoulli roundings of z_frac: trial t draws z_i ~
// Bernoulli(z_frac_i) (sub-seeded from seed and t), resampling up to 100
// times on a cardinality violation before falling back to
// restore_feasibility with priority z_frac; evaluates every draw and keeps
// the best. Deterministic for fixed (inputs, seed).
HeuristicResult randomized_rounding(const Eigen::VectorXd& z_frac, const FeasibleSet& feasible,
                                    const Oracle& oracle, const Eigen::VectorXd& c, int trials,
                                    std::uint64_t seed);

// Gradient-informed rounding. Phase 1 repeatedly rounds down, in one batch,
// every free coordinate whose cut gradient predicts that switching it off
// helps (grad_i * (0 - z_i) < 0), re-evaluating between batches. Phase 2
// rounds the remaining fractional coordinates up and repairs the budget with
// priority -grad (least useful dropped first). An oracle-infeasible
// intermediate point falls back to randomized_rounding with 10 trials.
HeuristicResult sequential_rounding(const Eigen::VectorXd& z_frac, const FeasibleSet& feasible,
                                    const Oracle& oracle, const Eigen::VectorXd& c);

// 1-opt local search from a binary start: at each step takes the
// single-coordinate switch with the best predicted objective change from the
// current cut gradient (0->1: c_i + grad_i, 1->0: -c_i - grad_i), skipping
// switches the box forbids and repairing budget violations by dropping the
// active coordinate with the smallest |gradient| (the switched coordinate is
// protected). Oracle-infeasible neighbours are marked visited and the
// next-best switch is tried; the walk stops on a revisit (cycle) or when no
// switch predicts improvement. Returns the best evaluated point, never worse
// than the start.
HeuristicResult local_search(const std::vector<int>& z_start, const FeasibleSet& feasible,
                             const Oracle& oracle, const Eigen::VectorXd& c);

}  // namespace logicut
