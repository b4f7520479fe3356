#include "cltj/graph.hpp"

#include <algorithm>

#include "cltj/error.hpp"

namespace cltj {

void Graph::add_edge(NodeId u, NodeId v) {
  CLTJ_EXPECT(u < adjacency_.size() && v < adjacency_.size());
  if (u == v) return;
  auto insert = [](std::vector<NodeId>& list, NodeId x) {
    auto it = std::lower_bound(list.begin(), list.end(), x);
    if (it == list.end() || *it != x) list.insert(it, x);
  };
  insert(adjacency_[u], v);
  insert(adjacency_[v], u);
}

std::size_t Graph::num_edges() const noexcept {
  std::size_t twice = 0;
  for (const auto& list : adjacency_) twice += list.size();
  return twice / 2;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto& list = adjacency_.at(u);
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph gaifman_graph(const Query& q) {
  Graph g(q.num_vars());
  for (const Atom& atom : q.atoms()) {
    std::vector<VarId> vars = atom.variables();
    for (std::size_t i = 0; i < vars.size(); ++i) {
      for (std::size_t j = i + 1; j < vars.size(); ++j) g.add_edge(vars[i], vars[j]);
    }
  }
  return g;
}

}  // namespace cltj
