// Synthetic instance generators. All randomness comes from the library's
// SplitMix64 generator seeded with GeneratorSpec::seed, and the draw order
// below is fixed, so a given (family, spec) pair always produces the same
// document byte for byte.

#include "logicut/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "logicut/oracles/netdesign.hpp"
#include "logicut/rng.hpp"

namespace logicut {
namespace {

using nlohmann::json;

// Index of the pair (i, j), i < j, in the lexicographic list of all pairs
// over m nodes: (0,1), (0,2), ..., (m-2, m-1).
int pair_index(int i, int j, int m) { return i * (m - 1) - i * (i - 1) / 2 + (j - i - 1); }

}  // namespace

InstanceFile generate_netdesign(const GeneratorSpec& spec) {
  const int m = spec.nodes;
  if (m < 2) throw std::invalid_argument("generate_netdesign: need at least two nodes");
  if (spec.extra_edge_multiplier < 0)
    throw std::invalid_argument("generate_netdesign: extra_edge_multiplier must be nonnegative");
  if (spec.cardinality_slack < 0.0)
    throw std::invalid_argument("generate_netdesign: cardinality_slack must be nonnegative");
  Rng rng(spec.seed);

  // Node coordinates on the unit square (flow costs are distance-based).
  std::vector<double> xs(m), ys(m);
  for (int i = 0; i < m; ++i) {
    xs[i] = rng.uniform();
    ys[i] = rng.uniform();
  }

  // One commodity per node: node j sends an integer demand from U(5, 25) to
  // every other node; its own entry balances the column to zero.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    double total = 0.0;
    for (int node = 0; node < m; ++node) {
      if (node == j) continue;
      const double demand = round_half_away(rng.uniform(5.0, 25.0));
      b(node, j) = demand;
      total += demand;
    }
    b(j, j) = -total;
  }
  const double total_demand = -b.diagonal().sum();

  // Candidate edges: every pair of nodes.
  const int num_edges = m * (m - 1) / 2;
  std::vector<NetdesignInstance::Edge> edges;
  edges.reserve(num_edges);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) edges.push_back({i, j});

  Eigen::VectorXd build_cost(num_edges);
  for (int e = 0; e < num_edges; ++e) build_cost[e] = rng.uniform(1.0, 4.0);

  Eigen::VectorXd d(num_edges);
  for (int e = 0; e < num_edges; ++e) {
    const double dx = xs[edges[e].tail] - xs[edges[e].head];
    const double dy = ys[edges[e].tail] - ys[edges[e].head];
    d[e] = 10.0 * std::sqrt(dx * dx + dy * dy);
  }

  // Soft capacities sized against the total demand spread over the existing
  // network: u ~ U(0.2, 1) * B / A with A = (1 + p) m edges.
  const double network_size = (1.0 + spec.extra_edge_multiplier) * m;
  Eigen::VectorXd u(num_edges);
  for (int e = 0; e < num_edges; ++e)
    u[e] = round_half_away(rng.uniform(0.2, 1.0) * total_demand / network_size);

  // Existing network: a random spanning tree plus p * m extra edges, all
  // forced on; the budget allows the network to grow by the slack fraction.
  std::set<int> forced;
  for (int node = 1; node < m; ++node)
    forced.insert(pair_index(rng.uniform_int(0, node - 1), node, m));
  const int extras_wanted = spec.extra_edge_multiplier * m;
  int extras_added = 0;
  int attempts = 0;
  while (extras_added < extras_wanted && static_cast<int>(forced.size()) < num_edges &&
         attempts < 100 * extras_wanted + 100) {
    ++attempts;
    const int a = rng.uniform_int(0, m - 1);
    const int c = rng.uniform_int(0, m - 1);
    if (a == c) continue;
    if (forced.insert(pair_index(std::min(a, c), std::max(a, c), m)).second) ++extras_added;
  }

  std::vector<int> lower(num_edges, 0);
  for (int e : forced) lower[e] = 1;
  const int existing = static_cast<int>(forced.size());
  const int budget =
      std::min(num_edges, static_cast<int>(std::floor((1.0 + spec.cardinality_slack) * existing)));

  json doc;
  doc["family"] = "netdesign";
  doc["num_nodes"] = m;
  json edge_list = json::array();
  for (const NetdesignInstance::Edge& edge : edges)
    edge_list.push_back(json::array({edge.tail, edge.head}));
  doc["edges"] = std::move(edge_list);
  doc["d"] = json_vector(d);
  doc["u"] = json_vector(u);
  doc["penalty"] = 1000.0;
  doc["b"] = json_matrix(b);
  doc["build_cost"] = json_vector(build_cost);
  doc["feasible_set"] = {{"lower", lower}, {"cardinality", budget}};
  doc["regularizer"] = {{"kind", "bigM"}, {"M", total_demand}};
  doc["meta"] = {{"generator", "netdesign"},
                 {"seed", spec.seed},
                 {"ridge_gamma", 2.0 / (static_cast<double>(m) * (m - 1))}};
  return InstanceFile{std::move(doc)};
}

InstanceFile generate_erm(const GeneratorSpec& spec) {
  const int n = spec.samples;
  const int p = spec.features;
  const int k = spec.sparsity;
  if (n < 1) throw std::invalid_argument("generate_erm: need at least one sample");
  if (p < 1) throw std::invalid_argument("generate_erm: need at least one feature");
  if (k < 1) throw std::invalid_argument("generate_erm: sparsity must be positive");
  if (k > p) throw std::invalid_argument("generate_erm: sparsity exceeds the feature count");
  if (!(spec.snr > 0.0)) throw std::invalid_argument("generate_erm: snr must be positive");
  Rng rng(spec.seed);

  // Planted support: the first k entries of a partial Fisher-Yates shuffle.
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  for (int t = 0; t < k; ++t) std::swap(perm[t], perm[rng.uniform_int(t, p - 1)]);
  std::vector<int> support(perm.begin(), perm.begin() + k);
  std::sort(support.begin(), support.end());

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  for (int idx : support) w[idx] = rng.bernoulli(0.5) ? 1.0 : -1.0;

  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();

  // Noise scaled so ||Xw||^2 / E||noise||^2 = snr; an infinite snr gives
  // sigma = 0 and exact responses.
  const Eigen::VectorXd signal = x * w;
  const double sigma =
      std::isfinite(spec.snr) ? signal.norm() / std::sqrt(n * spec.snr) : 0.0;
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double noisy = signal[i] + rng.normal(0.0, sigma);
    y[i] = spec.classification ? (noisy >= 0.0 ? 1.0 : -1.0) : noisy;
  }

  json doc;
  doc["family"] = "erm";
  doc["X"] = json_matrix(x);
  doc["y"] = json_vector(y);
  doc["loss"] = spec.classification ? "svm" : "ols";
  doc["feasible_set"] = {{"cardinality", k}};
  json meta = {{"generator", "erm"}, {"seed", spec.seed}, {"true_support", support}};
  if (std::isfinite(spec.snr)) meta["snr"] = spec.snr;
  doc["meta"] = std::move(meta);
  return InstanceFile{std::move(doc)};
}

}  // namespace logicut
