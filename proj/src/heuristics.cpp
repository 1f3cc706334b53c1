#include "logicut/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "logicut/rng.hpp"

namespace logicut {

namespace {

constexpr double kFracTol = 1e-9;

Eigen::VectorXd to_vec(const std::vector<int>& z) {
  Eigen::VectorXd v(z.size());
  for (size_t i = 0; i < z.size(); ++i) v[i] = z[i];
  return v;
}

void record(HeuristicResult& result, const std::vector<int>& z, double value) {
  if (value < result.ub) {
    result.ub = value;
    result.z_best = z;
    result.improvement_trace.push_back({z, value});
  }
}

void check_dims(const Eigen::VectorXd& z_frac, const FeasibleSet& feasible,
                const Oracle& oracle, const Eigen::VectorXd& c, const char* who) {
  if (z_frac.size() != feasible.n() || c.size() != feasible.n() ||
      oracle.num_binaries() != feasible.n())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

HeuristicResult randomized_rounding(const Eigen::VectorXd& z_frac, const FeasibleSet& feasible,
                                    const Oracle& oracle, const Eigen::VectorXd& c, int trials,
                                    std::uint64_t seed) {
  check_dims(z_frac, feasible, oracle, c, "randomized_rounding");
  if (trials < 1) throw std::invalid_argument("randomized_rounding: trials must be >= 1");
  const int n = feasible.n();

  HeuristicResult result;
  for (int t = 0; t < trials; ++t) {
    Rng rng(subseed(seed, t));
    std::vector<int> z(n);
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      for (int i = 0; i < n; ++i) z[i] = rng.bernoulli(z_frac[i]) ? 1 : 0;
      ok = feasible.contains(z);
    }
    if (!ok) z = feasible.restore_feasibility(z, z_frac);
    ++result.trials_attempted;

    if (result.z_best.empty()) result.z_best = z;  // feasible in Z even if ub stays +inf
    SubproblemResult res = oracle.evaluate(z);
    if (res.status != SubproblemStatus::Feasible) continue;
    record(result, z, c.dot(to_vec(z)) + res.f_value);
  }
  return result;
}

HeuristicResult sequential_rounding(const Eigen::VectorXd& z_frac, const FeasibleSet& feasible,
                                    const Oracle& oracle, const Eigen::VectorXd& c) {
  check_dims(z_frac, feasible, oracle, c, "sequential_rounding");
  const int n = feasible.n();

  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i)
    z[i] = std::min(std::max(z_frac[i], double(feasible.lower()[i])),
                    double(feasible.upper()[i]));

  // Phase 1: batch round-down while the gradient predicts it helps. Each pass
  // sends at least one positive coordinate to zero, so at most n passes run.
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
  for (int pass = 0; pass <= n; ++pass) {
    SubproblemResult res = oracle.evaluate_fractional(z);
    if (res.status != SubproblemStatus::Feasible)
      return randomized_rounding(z_frac, feasible, oracle, c, 10, 0);
    grad = res.cut.coefficients;
    bool any = false;
    for (int i = 0; i < n; ++i) {
      if (feasible.lower()[i] == 1 || z[i] <= kFracTol) continue;
      if (grad[i] * (0.0 - z[i]) < 0.0) {
        z[i] = 0.0;
        any = true;
      }
    }
    if (!any) break;
  }

  // Phase 2: everything still positive goes to 1, then the budget is repaired
  // dropping the coordinates whose gradient promises the least.
  std::vector<int> zi(n);
  for (int i = 0; i < n; ++i) zi[i] = z[i] > kFracTol ? 1 : 0;
  zi = feasible.restore_feasibility(zi, -grad);

  SubproblemResult res = oracle.evaluate(zi);
  if (res.status != SubproblemStatus::Feasible)
    return randomized_rounding(z_frac, feasible, oracle, c, 10, 0);

  HeuristicResult result;
  result.trials_attempted = 1;
  record(result, zi, c.dot(to_vec(zi)) + res.f_value);
  return result;
}

HeuristicResult local_search(const std::vector<int>& z_start, const FeasibleSet& feasible,
                             const Oracle& oracle, const Eigen::VectorXd& c) {
  const int n = feasible.n();
  if (static_cast<int>(z_start.size()) != n || c.size() != n || oracle.num_binaries() != n)
    throw std::invalid_argument("local_search: dimension mismatch");
  if (!feasible.contains(z_start))
    throw std::invalid_argument("local_search: start point outside the feasible set");

  HeuristicResult result;
  result.z_best = z_start;

  SubproblemResult cur = oracle.evaluate(z_start);
  if (cur.status != SubproblemStatus::Feasible) return result;  // ub stays +inf
  std::vector<int> z = z_start;
  record(result, z, c.dot(to_vec(z)) + cur.f_value);

  std::set<std::vector<int>> visited;
  visited.insert(z);

  for (;;) {
    const Eigen::VectorXd& grad = cur.cut.coefficients;

    // Candidate switches ranked by predicted objective change.
    std::vector<std::pair<double, int>> switches;
    for (int i = 0; i < n; ++i) {
      if (z[i] == 0 && feasible.upper()[i] == 1)
        switches.emplace_back(c[i] + grad[i], i);
      else if (z[i] == 1 && feasible.lower()[i] == 0)
        switches.emplace_back(-c[i] - grad[i], i);
    }
    std::sort(switches.begin(), switches.end());

    bool moved = false;
    bool cycled = false;
    for (const auto& [predicted, i] : switches) {
      if (predicted >= -1e-12) break;  // nothing left predicts improvement

      std::vector<int> cand = z;
      cand[i] = 1 - cand[i];
      if (feasible.cardinality() &&
          std::accumulate(cand.begin(), cand.end(), 0) > *feasible.cardinality()) {
        Eigen::VectorXd priority = grad.cwiseAbs();
        priority[i] = kInf;  // keep the switch that motivated the move
        cand = feasible.restore_feasibility(cand, priority);
      }
      if (cand == z) continue;
      if (visited.count(cand)) {
        cycled = true;
        break;
      }
      SubproblemResult res = oracle.evaluate(cand);
      ++result.trials_attempted;
      if (res.status != SubproblemStatus::Feasible) {
        visited.insert(cand);  // dead end; try the next-best switch
        continue;
      }
      z = cand;
      cur = res;
      visited.insert(z);
      record(result, z, c.dot(to_vec(z)) + res.f_value);
      moved = true;
      break;
    }
    if (cycled || !moved) break;
  }
  return result;
}

}  // namespace logicut
