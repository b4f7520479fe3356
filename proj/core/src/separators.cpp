#include "cltj/separators.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "cltj/error.hpp"
#include "cltj/maxflow.hpp"

namespace cltj {

NodeSet all_nodes(const Graph& g) {
  if (g.num_nodes() > kMaxSeparatorNodes) {
    throw Error("graph has " + std::to_string(g.num_nodes()) + " nodes; at most 64 are supported");
  }
  return g.num_nodes() == 64 ? ~NodeSet{0} : (NodeSet{1} << g.num_nodes()) - 1;
}

NodeSet make_set(std::span<const NodeId> nodes) {
  NodeSet s = 0;
  for (NodeId v : nodes) {
    CLTJ_EXPECT(v < kMaxSeparatorNodes);
    s |= node_bit(v);
  }
  return s;
}

NodeSet make_set(std::initializer_list<NodeId> nodes) { return make_set(std::span<const NodeId>(nodes.begin(), nodes.size())); }

std::vector<NodeId> members(NodeSet s) {
  std::vector<NodeId> out;
  while (s != 0) {
    out.push_back(static_cast<NodeId>(__builtin_ctzll(s)));
    s &= s - 1;
  }
  return out;
}

bool separator_less(NodeSet a, NodeSet b) {
  if (set_size(a) != set_size(b)) return set_size(a) < set_size(b);
  if (a == b) return false;
  NodeSet diff = a ^ b;
  return (a & diff & (~diff + 1)) != 0;
}

std::vector<NodeSet> components(const Graph& g, NodeSet nodes) {
  std::vector<NodeSet> out;
  NodeSet left = nodes;
  while (left != 0) {
    NodeId start = static_cast<NodeId>(__builtin_ctzll(left));
    NodeSet comp = node_bit(start);
    std::vector<NodeId> stack{start};
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(u)) {
        if (contains(nodes, w) && !contains(comp, w)) {
          comp |= node_bit(w);
          stack.push_back(w);
        }
      }
    }
    out.push_back(comp);
    left &= ~comp;
  }
  return out;
}

bool is_constrained_separator(const Graph& g, NodeSet separator, NodeSet constraint) {
  auto comps = components(g, all_nodes(g) & ~separator);
  if (comps.size() < 2) return false;
  for (NodeSet c : comps) {
    if ((c & constraint) == 0) return true;
  }
  return false;
}

SeparatorResult make_separator_result(const Graph& g, NodeSet separator, NodeSet constraint) {
  auto comps = components(g, all_nodes(g) & ~separator);
  bool separates = comps.size() >= 2;
  bool avoids = false;
  NodeSet u = 0;
  for (NodeSet c : comps) {
    if ((c & constraint) != 0) {
      u |= c;
    } else {
      avoids = true;
    }
  }
  if (!separates || !avoids) throw ContractViolation("node set is not a constrained separating set");
  if (u == 0) u = comps.front();
  CLTJ_EXPECT((constraint & ~(separator | u)) == 0);
  return {separator, u};
}

namespace {

constexpr std::size_t kNoCut = std::numeric_limits<std::size_t>::max();

/// Smallest number of nodes outside I whose removal (with I) puts t in a
/// component avoiding both C and s, or kNoCut if that exceeds `limit`.
std::size_t pair_cut(const SeparatorProblem& p, NodeId t, NodeId s, std::size_t limit) {
  const std::size_t n = p.g.num_nodes();
  const std::size_t sink = 2 * n;
  FlowNetwork net(2 * n + 1);
  for (NodeId w = 0; w < n; ++w) {
    if (contains(p.include, w)) continue;
    bool solid = contains(p.exclude, w) || w == s || w == t;
    net.add_arc(2 * w, 2 * w + 1, solid ? FlowNetwork::kInfinity : 1);
    for (NodeId x : p.g.neighbors(w)) {
      if (!contains(p.include, x)) net.add_arc(2 * w + 1, 2 * x, FlowNetwork::kInfinity);
    }
    if (contains(p.constraint, w)) net.add_arc(2 * w + 1, sink, FlowNetwork::kInfinity);
  }
  net.add_arc(2 * s, sink, FlowNetwork::kInfinity);
  auto flow = net.max_flow(2 * t + 1, sink, static_cast<std::int64_t>(limit));
  return flow <= static_cast<std::int64_t>(limit) ? static_cast<std::size_t>(flow) : kNoCut;
}

/// Minimum |S| (including I) over all (t, s) pairs, if it is at most `limit`.
/// With `first_fit`, returns as soon as any pair fits the limit.
std::size_t min_size(const SeparatorProblem& p, std::size_t limit, bool first_fit) {
  const std::size_t fixed = set_size(p.include);
  if (fixed > limit) return kNoCut;
  std::size_t best = kNoCut;
  const NodeId n = static_cast<NodeId>(p.g.num_nodes());
  std::size_t budget = std::min<std::size_t>(limit - fixed, n);
  for (NodeId t = 0; t < n; ++t) {
    if (contains(p.include | p.constraint, t)) continue;
    for (NodeId s = 0; s < n; ++s) {
      if (s == t || contains(p.include, s) || p.g.has_edge(t, s)) continue;
      std::size_t cut = pair_cut(p, t, s, budget);
      if (cut == kNoCut) continue;
      best = fixed + cut;
      if (first_fit || cut == 0) return best;
      budget = cut - 1;
    }
  }
  return best;
}

}  // namespace

std::optional<SeparatorResult> min_constrained_separator(const SeparatorProblem& p) {
  const NodeSet everything = all_nodes(p.g);
  CLTJ_EXPECT((p.include & p.exclude) == 0);
  CLTJ_EXPECT(((p.include | p.exclude | p.constraint) & ~everything) == 0);
  if (p.g.num_nodes() < 2) return std::nullopt;

  const std::size_t m = min_size(p, kNoCut - 1, false);
  if (m == kNoCut) return std::nullopt;

  SeparatorProblem q = p;
  for (NodeId v = 0; v < p.g.num_nodes(); ++v) {
    if (contains(q.include | q.exclude, v)) continue;
    if (set_size(q.include) == m) break;
    SeparatorProblem with = q;
    with.include |= node_bit(v);
    if (min_size(with, m, true) != kNoCut) {
      q.include = with.include;
    } else {
      q.exclude |= node_bit(v);
    }
  }
  CLTJ_EXPECT(set_size(q.include) == m);
  return make_separator_result(p.g, q.include, p.constraint);
}

SeparatorEnumerator::SeparatorEnumerator(Graph g, NodeSet constraint, std::optional<std::size_t> max_size)
    : g_(std::move(g)), constraint_(constraint), max_size_(max_size) {
  CLTJ_EXPECT((constraint_ & ~all_nodes(g_)) == 0);
  push(0, 0);
}

void SeparatorEnumerator::push(NodeSet include, NodeSet exclude) {
  auto r = min_constrained_separator({g_, constraint_, include, exclude});
  if (!r) return;
  if (max_size_ && set_size(r->separator) > *max_size_) return;
  queue_.push({*r, include, exclude});
}

std::optional<SeparatorResult> SeparatorEnumerator::next() {
  if (queue_.empty()) return std::nullopt;
  Entry top = queue_.top();
  queue_.pop();
  const NodeSet s = top.result.separator;
  NodeSet include = top.include;
  NodeSet exclude = top.exclude;
  for (NodeId v : members(all_nodes(g_) & ~(top.include | top.exclude))) {
    if (contains(s, v)) {
      push(include, exclude | node_bit(v));
      include |= node_bit(v);
    } else {
      push(include | node_bit(v), exclude);
      exclude |= node_bit(v);
    }
  }
  return top.result;
}

std::vector<NodeSet> enumerate_constrained_separators(const Graph& g, NodeSet constraint,
                                                      std::optional<std::size_t> max_count,
                                                      std::optional<std::size_t> max_size) {
  std::vector<NodeSet> out;
  SeparatorEnumerator e(g, constraint, max_size);
  while (!max_count || out.size() < *max_count) {
    auto r = e.next();
    if (!r) break;
    out.push_back(r->separator);
  }
  return out;
}

InducedGraph induced_subgraph(const Graph& g, NodeSet nodes) {
  InducedGraph out;
  out.original = members(nodes);
  std::vector<NodeId> index(g.num_nodes(), 0);
  for (std::size_t i = 0; i < out.original.size(); ++i) index[out.original[i]] = static_cast<NodeId>(i);
  out.g = Graph(out.original.size());
  for (NodeId u : out.original) {
    for (NodeId w : g.neighbors(u)) {
      if (u < w && contains(nodes, w)) out.g.add_edge(index[u], index[w]);
    }
  }
  return out;
}

}  // namespace cltj
