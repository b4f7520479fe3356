#include "cltj/maxflow.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "cltj/error.hpp"

namespace cltj {

void FlowNetwork::add_arc(std::size_t from, std::size_t to, std::int64_t capacity) {
  CLTJ_EXPECT(from < num_nodes() && to < num_nodes() && from != to && capacity >= 0);
  adjacency_[from].push_back({to, adjacency_[to].size(), capacity});
  adjacency_[to].push_back({from, adjacency_[from].size() - 1, 0});
}

std::int64_t FlowNetwork::max_flow(std::size_t source, std::size_t sink, std::int64_t limit) {
  CLTJ_EXPECT(source != sink);
  std::int64_t flow = 0;
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::pair<std::size_t, std::size_t>> via(num_nodes());
  while (flow <= limit) {
    std::fill(via.begin(), via.end(), std::pair{none, none});
    via[source] = {source, none};
    std::deque<std::size_t> queue{source};
    while (!queue.empty() && via[sink].first == none) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i < adjacency_[u].size(); ++i) {
        const Arc& a = adjacency_[u][i];
        if (a.residual > 0 && via[a.to].first == none) {
          via[a.to] = {u, i};
          queue.push_back(a.to);
        }
      }
    }
    if (via[sink].first == none) break;
    std::int64_t push = kInfinity;
    for (std::size_t v = sink; v != source; v = via[v].first) {
      push = std::min(push, adjacency_[via[v].first][via[v].second].residual);
    }
    for (std::size_t v = sink; v != source; v = via[v].first) {
      Arc& a = adjacency_[via[v].first][via[v].second];
      a.residual -= push;
      adjacency_[a.to][a.reverse].residual += push;
    }
    flow += push;
  }
  return flow;
}

std::vector<bool> FlowNetwork::source_side(std::size_t source) const {
  std::vector<bool> seen(num_nodes(), false);
  std::vector<std::size_t> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (const Arc& a : adjacency_[u]) {
      if (a.residual > 0 && !seen[a.to]) {
        seen[a.to] = true;
        stack.push_back(a.to);
      }
    }
  }
  return seen;
}

}  // namespace cltj
