#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "cltj/graph.hpp"

namespace cltj {

/// Set of graph nodes as a bitmask; graphs handled here have at most 64 nodes.
using NodeSet = std::uint64_t;
inline constexpr std::size_t kMaxSeparatorNodes = 64;

inline NodeSet node_bit(NodeId v) { return NodeSet{1} << v; }
inline bool contains(NodeSet s, NodeId v) { return (s >> v) & 1U; }
inline std::size_t set_size(NodeSet s) { return static_cast<std::size_t>(__builtin_popcountll(s)); }
NodeSet all_nodes(const Graph& g);
NodeSet make_set(std::span<const NodeId> nodes);
NodeSet make_set(std::initializer_list<NodeId> nodes);
std::vector<NodeId> members(NodeSet s);

/// Smaller size first; equal sizes compare by ascending member sequence.
bool separator_less(NodeSet a, NodeSet b);

/// Connected components of g restricted to `nodes`, ordered by smallest member.
std::vector<NodeSet> components(const Graph& g, NodeSet nodes);

/// g - S has at least two components and one of them avoids C.
bool is_constrained_separator(const Graph& g, NodeSet separator, NodeSet constraint);

struct SeparatorProblem {
  Graph g;
  NodeSet constraint = 0;  // C
  NodeSet include = 0;     // I: forced into S
  NodeSet exclude = 0;     // X: forbidden in S
};

struct SeparatorResult {
  NodeSet separator = 0;  // S
  /// Union of the components of g - S meeting C, or the component holding
  /// the smallest node when none does.
  NodeSet component_union = 0;  // U

  friend bool operator==(const SeparatorResult&, const SeparatorResult&) = default;
};

/// Builds the result for a known separator; checks the separator property and
/// C ⊆ S ∪ U.
SeparatorResult make_separator_result(const Graph& g, NodeSet separator, NodeSet constraint);

/// Minimum-cardinality C-constrained separating set honoring I and X, ties
/// broken by ascending member sequence. Solved by vertex min cut with node
/// splitting. nullopt if infeasible.
std::optional<SeparatorResult> min_constrained_separator(const SeparatorProblem& p);

/// Ranked enumeration of C-constrained separating sets by (size, member
/// sequence), branching on membership constraints.
class SeparatorEnumerator {
 public:
  /// Sets larger than `max_size` are never produced.
  SeparatorEnumerator(Graph g, NodeSet constraint, std::optional<std::size_t> max_size = std::nullopt);

  std::optional<SeparatorResult> next();

 private:
  struct Entry {
    SeparatorResult result;
    NodeSet include;
    NodeSet exclude;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return separator_less(b.result.separator, a.result.separator);
    }
  };

  void push(NodeSet include, NodeSet exclude);

  Graph g_;
  NodeSet constraint_;
  std::optional<std::size_t> max_size_;
  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
};

/// Convenience wrapper collecting up to `max_count` sets.
std::vector<NodeSet> enumerate_constrained_separators(const Graph& g, NodeSet constraint,
                                                      std::optional<std::size_t> max_count = std::nullopt,
                                                      std::optional<std::size_t> max_size = std::nullopt);

/// Subgraph induced by `nodes`, renumbered ascending; `original[i]` is the
/// source node of new node i.
struct InducedGraph {
  Graph g;
  std::vector<NodeId> original;
};
InducedGraph induced_subgraph(const Graph& g, NodeSet nodes);

}  // namespace cltj
