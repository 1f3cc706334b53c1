#pragma once

#include <vector>

namespace logicut {

// Edmonds-Karp maximum flow on a directed graph with real capacities.
// Used by the flow-based oracles for feasibility screening: the value says
// whether demand can be routed, and the source-side min cut turns an
// infeasibility into a capacity inequality over the design variables.
class MaxflowGraph {
 public:
  explicit MaxflowGraph(int num_nodes);

  // Adds a forward arc with the given capacity (and the implicit zero-capacity
  // reverse residual arc). Returns the arc id.
  int add_arc(int from, int to, double capacity);

  // Runs Edmonds-Karp from source to sink and returns the flow value.
  double solve(int source, int sink);

  // After solve: nodes reachable from the source in the residual graph
  // (the source side of a minimum cut).
  const std::vector<char>& source_side() const { return reachable_; }

  double flow_on(int arc_id) const { return flow_[arc_id]; }

 private:
  struct Arc {
    int to;
    int rev;  // index of the reverse arc in adj_[to]
    double cap;
  };

  bool bfs(int source, int sink, std::vector<int>& prev_node, std::vector<int>& prev_arc);
  void mark_reachable(int source);

  int n_;
  std::vector<std::vector<Arc>> adj_;
  std::vector<int> arc_node_;   // arc id -> node holding the forward arc
  std::vector<int> arc_index_;  // arc id -> position in adj_[node]
  std::vector<double> flow_;
  std::vector<char> reachable_;
};

}  // namespace logicut
