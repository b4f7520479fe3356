#include "cltj/td.hpp"

#include <algorithm>
#include <numeric>

#include "cltj/error.hpp"
#include "cltj/graph.hpp"

namespace cltj {

OrderedTD::OrderedTD(std::vector<std::vector<VarId>> bags, std::vector<std::optional<std::size_t>> parents) {
  const std::size_t n = bags.size();
  if (n == 0) throw Error("tree decomposition needs at least one node");
  if (parents.size() != n) throw Error("bag and parent lists differ in length");
  std::optional<std::size_t> root;
  std::vector<std::vector<std::size_t>> kids(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!parents[i]) {
      if (root) throw Error("tree decomposition has more than one root");
      root = i;
    } else {
      if (*parents[i] >= n || *parents[i] == i) throw Error("invalid parent reference");
      kids[*parents[i]].push_back(i);
    }
  }
  if (!root) throw Error("tree decomposition has no root");

  std::vector<std::size_t> preorder;
  preorder.reserve(n);
  std::vector<std::size_t> stack{*root};
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    preorder.push_back(v);
    if (preorder.size() > n) throw Error("tree decomposition contains a cycle");
    for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.push_back(*it);
  }
  if (preorder.size() != n) throw Error("tree decomposition is not connected");

  std::vector<std::size_t> index(n);
  for (std::size_t k = 0; k < n; ++k) index[preorder[k]] = k;

  bags_.resize(n);
  sorted_bags_.resize(n);
  parents_.resize(n);
  children_.resize(n);
  adhesions_.resize(n);
  subtree_end_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t old = preorder[k];
    bags_[k] = std::move(bags[old]);
    sorted_bags_[k] = bags_[k];
    std::sort(sorted_bags_[k].begin(), sorted_bags_[k].end());
    if (std::adjacent_find(sorted_bags_[k].begin(), sorted_bags_[k].end()) != sorted_bags_[k].end()) {
      throw Error("bag repeats a variable");
    }
    if (parents[old]) parents_[k] = index[*parents[old]];
    for (std::size_t c : kids[old]) children_[k].push_back(index[c]);
  }
  for (std::size_t k = n; k-- > 0;) {
    subtree_end_[k] = children_[k].empty() ? k + 1 : subtree_end_[children_[k].back()];
    if (parents_[k]) {
      const auto& mine = sorted_bags_[k];
      const auto& theirs = sorted_bags_[*parents_[k]];
      std::set_intersection(mine.begin(), mine.end(), theirs.begin(), theirs.end(),
                            std::back_inserter(adhesions_[k]));
    }
  }
  VarId max_var = 0;
  for (const auto& b : sorted_bags_) {
    if (!b.empty()) max_var = std::max(max_var, b.back() + 1);
  }
  owner_.assign(max_var, std::nullopt);
  for (std::size_t k = 0; k < n; ++k) {
    for (VarId v : sorted_bags_[k]) {
      if (!owner_[v]) {
        owner_[v] = k;
        variables_.push_back(v);
      }
    }
  }
  std::sort(variables_.begin(), variables_.end());
}

OrderedTD OrderedTD::singleton(std::vector<VarId> bag) {
  return OrderedTD({std::move(bag)}, {std::nullopt});
}

bool OrderedTD::contains(std::size_t node, VarId var) const {
  const auto& b = sorted_bags_.at(node);
  return std::binary_search(b.begin(), b.end(), var);
}

std::optional<std::size_t> OrderedTD::owner(VarId var) const {
  return var < owner_.size() ? owner_[var] : std::nullopt;
}

std::vector<VarId> OrderedTD::owned_by(std::size_t node) const {
  std::vector<VarId> out;
  for (VarId v : sorted_bags_.at(node)) {
    if (owner_[v] == node) out.push_back(v);
  }
  return out;
}

std::size_t OrderedTD::node_depth(std::size_t node) const {
  std::size_t d = 0;
  for (auto p = parents_.at(node); p; p = parents_[*p]) ++d;
  return d;
}

std::size_t OrderedTD::depth() const noexcept {
  std::vector<std::size_t> d(size(), 0);
  std::size_t best = 0;
  for (std::size_t k = 1; k < size(); ++k) {
    d[k] = d[*parents_[k]] + 1;
    best = std::max(best, d[k]);
  }
  return best;
}

std::size_t OrderedTD::max_adhesion() const noexcept {
  std::size_t best = 0;
  for (std::size_t k = 1; k < size(); ++k) best = std::max(best, adhesions_[k].size());
  return best;
}

std::optional<TdViolation> validate_td(const Query& q, const OrderedTD& td) {
  for (VarId v : td.variables()) {
    if (v >= q.num_vars()) {
      return TdViolation{TdViolation::Kind::kUnknownVariable, v,
                         "variable id " + std::to_string(v) + " is not a query variable"};
    }
  }
  for (std::size_t a = 0; a < q.atoms().size(); ++a) {
    std::vector<VarId> vars = q.atoms()[a].variables();
    bool covered = false;
    for (std::size_t k = 0; k < td.size() && !covered; ++k) {
      const auto& b = td.bag_set(k);
      covered = std::includes(b.begin(), b.end(), vars.begin(), vars.end());
    }
    if (!covered) {
      return TdViolation{TdViolation::Kind::kUncoveredAtom, a,
                         "atom " + std::to_string(a) + " is not covered by any bag"};
    }
  }
  for (VarId v = 0; v < q.num_vars(); ++v) {
    std::size_t tops = 0;
    for (std::size_t k = 0; k < td.size(); ++k) {
      if (!td.contains(k, v)) continue;
      auto p = td.parent(k);
      if (!p || !td.contains(*p, v)) ++tops;
    }
    if (tops > 1) {
      return TdViolation{TdViolation::Kind::kDisconnectedVariable, v,
                         "bags containing " + q.var_name(v) + " are not connected"};
    }
  }
  return std::nullopt;
}

VariableRank degree_rank(const Query& q) {
  Graph g = gaifman_graph(q);
  const auto n = static_cast<std::int64_t>(q.num_vars());
  VariableRank rank(q.num_vars());
  for (VarId v = 0; v < q.num_vars(); ++v) {
    rank[v] = -static_cast<std::int64_t>(g.degree(v)) * n + static_cast<std::int64_t>(v);
  }
  return rank;
}

VariableRank appearance_rank(const Query& q) {
  VariableRank rank(q.num_vars());
  std::iota(rank.begin(), rank.end(), std::int64_t{0});
  return rank;
}

VarOrdering derive_ordering(const OrderedTD& td, const VariableRank& rank) {
  VarOrdering out;
  for (std::size_t k = 0; k < td.size(); ++k) {
    std::vector<VarId> owned = td.owned_by(k);
    std::sort(owned.begin(), owned.end(), [&](VarId a, VarId b) {
      std::int64_t ra = a < rank.size() ? rank[a] : 0;
      std::int64_t rb = b < rank.size() ? rank[b] : 0;
      return ra != rb ? ra < rb : a < b;
    });
    for (VarId v : owned) {
      out.order.push_back(v);
      out.owners.push_back(k);
    }
  }
  return out;
}

bool is_strongly_compatible(const OrderedTD& td, std::span<const VarId> ordering) {
  if (ordering.size() != td.variables().size()) return false;
  std::size_t prev = 0;
  for (VarId v : ordering) {
    auto o = td.owner(v);
    if (!o || *o < prev) return false;
    prev = *o;
  }
  std::vector<VarId> sorted(ordering.begin(), ordering.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted == td.variables();
}

bool is_compatible(const OrderedTD& td, std::span<const VarId> ordering) {
  std::vector<std::size_t> owners;
  for (VarId v : ordering) {
    auto o = td.owner(v);
    if (!o) return false;
    owners.push_back(*o);
  }
  for (std::size_t i = 0; i < owners.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      // owner(x_i) parent of owner(x_j) with j < i violates compatibility
      if (td.parent(owners[j]) == owners[i]) return false;
    }
  }
  return true;
}

OwnedBlocks owned_blocks(const OrderedTD& td, std::span<const VarId> ordering) {
  if (!is_strongly_compatible(td, ordering)) {
    throw PlanError("variable ordering is not strongly compatible with the tree decomposition");
  }
  const std::size_t n = td.size();
  std::vector<std::size_t> cum(n + 1, 0);
  OwnedBlocks blocks;
  for (VarId v : ordering) {
    std::size_t o = *td.owner(v);
    blocks.owner_at.push_back(o);
    ++cum[o + 1];
  }
  for (std::size_t k = 0; k < n; ++k) cum[k + 1] += cum[k];
  blocks.own_begin.resize(n);
  blocks.own_end.resize(n);
  blocks.subtree_end.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    blocks.own_begin[k] = cum[k];
    blocks.own_end[k] = cum[k + 1];
    blocks.subtree_end[k] = cum[td.subtree_end(k)];
  }
  return blocks;
}

OrderedTD remove_redundant_bags(const OrderedTD& td) {
  struct Node {
    std::vector<VarId> bag;
    std::vector<VarId> set;
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;
  };
  std::vector<Node> nodes(td.size());
  for (std::size_t k = 0; k < td.size(); ++k) {
    nodes[k] = {td.bag(k), td.bag_set(k), td.parent(k), td.children(k)};
  }
  std::size_t root = 0;
  auto subset = [](const std::vector<VarId>& a, const std::vector<VarId>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  auto replace_child = [&](std::size_t parent, std::size_t child, const std::vector<std::size_t>& with) {
    auto& list = nodes[parent].children;
    auto it = std::find(list.begin(), list.end(), child);
    it = list.erase(it);
    list.insert(it, with.begin(), with.end());
  };

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::size_t> order{root};
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t c : nodes[order[i]].children) order.push_back(c);
    }
    for (std::size_t v : order) {
      auto p = nodes[v].parent;
      if (!p) continue;
      if (subset(nodes[v].set, nodes[*p].set)) {
        auto kids = nodes[v].children;
        for (std::size_t c : kids) nodes[c].parent = *p;
        replace_child(*p, v, kids);
        changed = true;
        break;
      }
      if (subset(nodes[*p].set, nodes[v].set)) {
        auto& siblings = nodes[*p].children;
        auto pos = std::find(siblings.begin(), siblings.end(), v);
        std::vector<std::size_t> adopted(siblings.begin(), pos);
        adopted.insert(adopted.end(), nodes[v].children.begin(), nodes[v].children.end());
        adopted.insert(adopted.end(), pos + 1, siblings.end());
        for (std::size_t c : adopted) nodes[c].parent = v;
        nodes[v].children = adopted;
        nodes[v].parent = nodes[*p].parent;
        if (nodes[*p].parent) {
          replace_child(*nodes[*p].parent, *p, {v});
        } else {
          root = v;
        }
        changed = true;
        break;
      }
    }
  }

  std::vector<std::vector<VarId>> bags;
  std::vector<std::optional<std::size_t>> parents;
  auto emit = [&](auto&& self, std::size_t v, std::optional<std::size_t> parent) -> void {
    std::size_t id = bags.size();
    bags.push_back(nodes[v].bag);
    parents.push_back(parent);
    for (std::size_t c : nodes[v].children) self(self, c, id);
  };
  emit(emit, root, std::nullopt);
  return OrderedTD(std::move(bags), std::move(parents));
}

}  // namespace cltj
