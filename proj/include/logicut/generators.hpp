#pragma once

#include <cstdint>

#include "logicut/instance_io.hpp"

namespace logicut {

// Knobs for the synthetic instance generators. Each family reads its own
// subset; the seed is always consumed (generation is deterministic per seed).
struct GeneratorSpec {
  // Network design: `nodes` on the unit square, an existing network of a
  // random spanning tree plus `extra_edge_multiplier * nodes` extra edges
  // (forced on), and a cardinality budget allowing `cardinality_slack`
  // relative growth of the existing network.
  int nodes = 6;
  int extra_edge_multiplier = 1;
  double cardinality_slack = 0.05;

  // Sparse regression / classification: `samples` Gaussian rows over
  // `features` columns, true weights of +-1 on `sparsity` random coordinates,
  // noise scaled so that ||Xw||^2 / E||noise||^2 = snr (an infinite snr
  // yields noiseless responses). `classification` switches to sign labels
  // and the hinge loss.
  int samples = 30;
  int features = 10;
  int sparsity = 3;
  double snr = 6.0;
  bool classification = false;

  std::uint64_t seed = 0;
};

// Multicommodity network design on the complete graph: one commodity per
// node, integer demands from U(5, 25) to every other node, edge build costs
// from U(1, 4), flow costs 10x the Euclidean edge length, and soft capacities
// from U(0.2, 1) * B / A where B is the total demand and A the existing
// network size. The emitted file records the big-M block M = B; the matching
// ridge strength 2 / (m (m - 1)) is kept in "meta".
InstanceFile generate_netdesign(const GeneratorSpec& spec);

// Sparse empirical risk minimization with a planted support; the support is
// recorded in "meta" and the cardinality budget equals the planted sparsity.
InstanceFile generate_erm(const GeneratorSpec& spec);

}  // namespace logicut
