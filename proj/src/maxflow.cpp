#include "logicut/maxflow.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace logicut {

namespace {
constexpr double kFlowTol = 1e-12;
}

MaxflowGraph::MaxflowGraph(int num_nodes) : n_(num_nodes), adj_(num_nodes) {
  if (num_nodes <= 0) throw std::invalid_argument("MaxflowGraph: empty graph");
}

int MaxflowGraph::add_arc(int from, int to, double capacity) {
  if (from < 0 || from >= n_ || to < 0 || to >= n_)
    throw std::invalid_argument("MaxflowGraph: arc endpoint out of range");
  if (capacity < 0.0) capacity = 0.0;
  const int id = static_cast<int>(arc_node_.size());
  adj_[from].push_back({to, static_cast<int>(adj_[to].size()), capacity});
  adj_[to].push_back({from, static_cast<int>(adj_[from].size()) - 1, 0.0});
  arc_node_.push_back(from);
  arc_index_.push_back(static_cast<int>(adj_[from].size()) - 1);
  flow_.push_back(0.0);
  return id;
}

bool MaxflowGraph::bfs(int source, int sink, std::vector<int>& prev_node,
                       std::vector<int>& prev_arc) {
  prev_node.assign(n_, -1);
  prev_arc.assign(n_, -1);
  prev_node[source] = source;
  std::deque<int> queue{source};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (size_t k = 0; k < adj_[v].size(); ++k) {
      const Arc& a = adj_[v][k];
      if (a.cap > kFlowTol && prev_node[a.to] < 0) {
        prev_node[a.to] = v;
        prev_arc[a.to] = static_cast<int>(k);
        if (a.to == sink) return true;
        queue.push_back(a.to);
      }
    }
  }
  return false;
}

double MaxflowGraph::solve(int source, int sink) {
  if (source == sink) throw std::invalid_argument("MaxflowGraph: source equals sink");
  double total = 0.0;
  std::vector<int> prev_node, prev_arc;
  while (bfs(source, sink, prev_node, prev_arc)) {
    double push = std::numeric_limits<double>::infinity();
    for (int v = sink; v != source; v = prev_node[v])
      push = std::min(push, adj_[prev_node[v]][prev_arc[v]].cap);
    for (int v = sink; v != source; v = prev_node[v]) {
      Arc& fwd = adj_[prev_node[v]][prev_arc[v]];
      adj_[v][fwd.rev].cap += push;
      fwd.cap -= push;
    }
    total += push;
  }
  mark_reachable(source);
  for (size_t id = 0; id < flow_.size(); ++id) {
    const Arc& fwd = adj_[arc_node_[id]][arc_index_[id]];
    flow_[id] = adj_[fwd.to][fwd.rev].cap;  // residual of the reverse arc
  }
  return total;
}

void MaxflowGraph::mark_reachable(int source) {
  reachable_.assign(n_, 0);
  reachable_[source] = 1;
  std::deque<int> queue{source};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (const Arc& a : adj_[v]) {
      if (a.cap > kFlowTol && !reachable_[a.to]) {
        reachable_[a.to] = 1;
        queue.push_back(a.to);
      }
    }
  }
}

}  // namespace logicut
