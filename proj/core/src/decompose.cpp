#include "cltj/decompose.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "cltj/error.hpp"

namespace cltj {

namespace {

/// Value-semantic tree used while assembling decompositions.
struct SubTree {
  std::vector<VarId> bag;
  std::vector<SubTree> children;
};

std::vector<VarId> to_bag(NodeSet nodes) {
  std::vector<VarId> bag;
  for (NodeId v : members(nodes)) bag.push_back(static_cast<VarId>(v));
  return bag;
}

OrderedTD to_td(const SubTree& root) {
  std::vector<std::vector<VarId>> bags;
  std::vector<std::optional<std::size_t>> parents;
  auto emit = [&](auto&& self, const SubTree& t, std::optional<std::size_t> parent) -> void {
    std::size_t id = bags.size();
    bags.push_back(t.bag);
    parents.push_back(parent);
    for (const SubTree& c : t.children) self(self, c, id);
  };
  emit(emit, root, std::nullopt);
  return OrderedTD(std::move(bags), std::move(parents));
}

NodeSet map_in(NodeSet s, const InducedGraph& ind) {
  NodeSet out = 0;
  for (std::size_t i = 0; i < ind.original.size(); ++i) {
    if (contains(s, ind.original[i])) out |= node_bit(static_cast<NodeId>(i));
  }
  return out;
}

NodeSet map_out(NodeSet s, const InducedGraph& ind) {
  NodeSet out = 0;
  for (NodeId i : members(s)) out |= node_bit(ind.original[i]);
  return out;
}

/// Checks a chooser's answer on the local graph.
void check_choice(const Graph& g, NodeSet constraint, const SeparatorResult& r) {
  const NodeSet everything = all_nodes(g);
  const NodeSet s = r.separator;
  const NodeSet u = r.component_union;
  bool ok = (s & ~everything) == 0 && (u & ~everything) == 0 && (s & u) == 0 && u != 0 &&
            is_constrained_separator(g, s, constraint) && (constraint & ~(s | u)) == 0 &&
            (s | u) != everything;
  if (ok) {
    for (NodeSet comp : components(g, everything & ~s)) {
      if ((comp & u) != 0 && (comp & ~u) != 0) ok = false;
    }
  }
  if (!ok) throw ContractViolation("separator chooser returned an invalid separating set");
}

SubTree recurse(const Graph& full, NodeSet nodes, NodeSet constraint, const SeparatorChooser& chooser) {
  InducedGraph ind = induced_subgraph(full, nodes);
  const NodeSet local_c = map_in(constraint, ind);
  auto choice = chooser(ind.g, local_c);
  if (!choice) return {to_bag(nodes), {}};
  check_choice(ind.g, local_c, *choice);
  const NodeSet s = map_out(choice->separator, ind);
  const NodeSet u = map_out(choice->component_union, ind);
  SubTree top = recurse(full, s | u, constraint | s, chooser);
  for (NodeSet comp : components(full, nodes & ~(s | u))) {
    top.children.push_back(recurse(full, s | comp, s, chooser));
  }
  return top;
}

/// Continuation-passing enumeration of subtrees; `k` returns false to stop.
class TdEnumerator {
 public:
  using Sink = std::function<bool(const SubTree&)>;

  TdEnumerator(const Graph& full, const DecomposeLimits& limits) : full_(full), limits_(limits) {}

  bool run(NodeSet nodes, NodeSet constraint, const Sink& k) {
    InducedGraph ind = induced_subgraph(full_, nodes);
    std::vector<SeparatorResult> choices;
    if (ind.g.num_nodes() >= 3) {
      SeparatorEnumerator e(ind.g, map_in(constraint, ind), limits_.max_adhesion);
      while (choices.size() < limits_.max_seps_per_level) {
        auto r = e.next();
        if (!r) break;
        choices.push_back({map_out(r->separator, ind), map_out(r->component_union, ind)});
      }
    }
    if (choices.empty()) return k(SubTree{to_bag(nodes), {}});
    for (const SeparatorResult& r : choices) {
      const NodeSet s = r.separator;
      const NodeSet u = r.component_union;
      std::vector<NodeSet> rest = components(full_, nodes & ~(s | u));
      bool go = run(s | u, constraint | s, [&](const SubTree& top) {
        return attach(top, s, rest, 0, k);
      });
      if (!go) return false;
    }
    return true;
  }

 private:
  bool attach(const SubTree& partial, NodeSet s, const std::vector<NodeSet>& rest, std::size_t i, const Sink& k) {
    if (i == rest.size()) return k(partial);
    return run(s | rest[i], s, [&](const SubTree& child) {
      SubTree next = partial;
      next.children.push_back(child);
      return attach(next, s, rest, i + 1, k);
    });
  }

  const Graph& full_;
  DecomposeLimits limits_;
};

/// Runs `per_component` over each connected component; several components
/// are joined under an empty root.
template <typename PerComponent>
bool over_components(const Graph& g, PerComponent&& per_component, const std::function<bool(const SubTree&)>& k) {
  std::vector<NodeSet> comps = components(g, all_nodes(g));
  if (comps.size() <= 1) return per_component(all_nodes(g), k);
  auto step = [&](auto&& self, SubTree partial, std::size_t i) -> bool {
    if (i == comps.size()) return k(partial);
    return per_component(comps[i], [&](const SubTree& t) {
      SubTree next = partial;
      next.children.push_back(t);
      return self(self, std::move(next), i + 1);
    });
  };
  return step(step, SubTree{}, 0);
}

std::string canonical(const OrderedTD& td) {
  std::string key;
  for (std::size_t k = 0; k < td.size(); ++k) {
    key += td.parent(k) ? std::to_string(*td.parent(k)) : "-";
    key += ':';
    for (VarId v : td.bag_set(k)) key += std::to_string(v) + ',';
    key += ';';
  }
  return key;
}

}  // namespace

OrderedTD recursive_td(const Graph& g, NodeSet constraint, const SeparatorChooser& chooser) {
  const NodeSet everything = all_nodes(g);
  CLTJ_EXPECT((constraint & ~everything) == 0);
  return to_td(recurse(g, everything, constraint, chooser));
}

SeparatorChooser default_chooser(std::size_t max_adhesion) {
  return [max_adhesion](const Graph& g, NodeSet constraint) -> std::optional<SeparatorResult> {
    if (g.num_nodes() < 3) return std::nullopt;
    return SeparatorEnumerator(g, constraint, max_adhesion).next();
  };
}

OrderedTD generic_decompose(const Query& q, std::size_t max_adhesion) {
  Graph g = gaifman_graph(q);
  if (g.num_nodes() == 0) return OrderedTD::singleton({});
  auto chooser = default_chooser(max_adhesion);
  std::optional<SubTree> result;
  over_components(
      g,
      [&](NodeSet nodes, const std::function<bool(const SubTree&)>& k) {
        return k(recurse(g, nodes, 0, chooser));
      },
      [&](const SubTree& t) {
        result = t;
        return false;
      });
  return remove_redundant_bags(to_td(*result));
}

std::vector<OrderedTD> enumerate_tds(const Query& q, const DecomposeLimits& limits) {
  CLTJ_EXPECT(limits.max_adhesion > 0 && limits.max_tds > 0 && limits.max_seps_per_level > 0);
  Graph g = gaifman_graph(q);
  if (g.num_nodes() == 0) return {OrderedTD::singleton({})};
  TdEnumerator e(g, limits);
  std::vector<OrderedTD> out;
  std::set<std::string> seen;
  over_components(
      g,
      [&](NodeSet nodes, const std::function<bool(const SubTree&)>& k) { return e.run(nodes, 0, k); },
      [&](const SubTree& t) {
        OrderedTD td = remove_redundant_bags(to_td(t));
        if (seen.insert(canonical(td)).second) out.push_back(std::move(td));
        return out.size() < limits.max_tds;
      });
  return out;
}

bool preferred(const TDScore& a, const TDScore& b) {
  // a single bag ranks after any real decomposition
  if ((a.bags == 1) != (b.bags == 1)) return b.bags == 1;
  if (a.max_adhesion != b.max_adhesion) return a.max_adhesion < b.max_adhesion;
  if (a.bags != b.bags) return a.bags > b.bags;
  if (a.depth != b.depth) return a.depth < b.depth;
  if (a.skew && b.skew && *a.skew != *b.skew) return *a.skew > *b.skew;
  return false;
}

TDScore score_td(const OrderedTD& td, const Query& q, const StatsCatalog* stats) {
  TDScore score;
  score.max_adhesion = td.max_adhesion();
  score.bags = td.size();
  score.depth = td.depth();
  if (stats) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 1; k < td.size(); ++k) {
      for (VarId v : td.adhesion(k)) {
        for (const Atom& a : q.atoms()) {
          auto it = stats->find(a.relation);
          if (it == stats->end()) continue;
          for (std::size_t c = 0; c < a.arity() && c < it->second.columns.size(); ++c) {
            if (a.terms[c].is_variable() && a.terms[c].var() == v) {
              sum += it->second.columns[c].duplication;
              ++n;
            }
          }
        }
      }
    }
    score.skew = n == 0 ? 0.0 : sum / static_cast<double>(n);
  }
  return score;
}

std::vector<OrderedTD> rank_tds(std::vector<OrderedTD> tds, const Query& q, const StatsCatalog* stats) {
  std::vector<std::pair<TDScore, std::size_t>> keyed;
  for (std::size_t i = 0; i < tds.size(); ++i) keyed.emplace_back(score_td(tds[i], q, stats), i);
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return preferred(a.first, b.first); });
  std::vector<OrderedTD> out;
  for (const auto& [score, i] : keyed) out.push_back(std::move(tds[i]));
  return out;
}

}  // namespace cltj
