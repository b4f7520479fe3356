#pragma once

#include <cstdint>
#include <vector>

namespace cltj {

/// Directed flow network solved by BFS augmenting paths (Edmonds-Karp).
class FlowNetwork {
 public:
  static constexpr std::int64_t kInfinity = std::int64_t{1} << 40;

  explicit FlowNetwork(std::size_t num_nodes) : adjacency_(num_nodes) {}

  std::size_t num_nodes() const noexcept { return adjacency_.size(); }
  void add_arc(std::size_t from, std::size_t to, std::int64_t capacity);

  /// Max flow from `source` to `sink`. Stops early once the flow exceeds
  /// `limit`, returning a value > limit.
  std::int64_t max_flow(std::size_t source, std::size_t sink, std::int64_t limit = kInfinity);

  /// Nodes reachable from the source in the residual network after max_flow.
  std::vector<bool> source_side(std::size_t source) const;

 private:
  struct Arc {
    std::size_t to;
    std::size_t reverse;
    std::int64_t residual;
  };
  std::vector<std::vector<Arc>> adjacency_;
};

}  // namespace cltj
