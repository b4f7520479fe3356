#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cltj/query.hpp"

namespace cltj {

using NodeId = std::uint32_t;

/// Simple undirected graph: no self-loops, no parallel edges, neighbor lists
/// kept strictly ascending.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t num_nodes) : adjacency_(num_nodes) {}

  /// Self-loops are ignored; re-adding an existing edge is a no-op.
  void add_edge(NodeId u, NodeId v);

  std::size_t num_nodes() const noexcept { return adjacency_.size(); }
  std::size_t num_edges() const noexcept;
  bool has_edge(NodeId u, NodeId v) const;
  std::span<const NodeId> neighbors(NodeId u) const { return adjacency_.at(u); }
  std::size_t degree(NodeId u) const { return adjacency_.at(u).size(); }
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
};

/// One node per query variable, an edge for every pair co-occurring in an atom.
Graph gaifman_graph(const Query& q);

}  // namespace cltj
