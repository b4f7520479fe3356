#include "cltj/clftj.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <type_traits>

namespace cltj {

OrderedTD contract_unowned_nodes(const OrderedTD& td) {
  const std::size_t n = td.size();
  std::vector<bool> keep(n);
  for (std::size_t k = 0; k < n; ++k) keep[k] = !td.owned_by(k).empty();

  std::optional<std::size_t> new_root;
  for (std::size_t k = 0; k < n && !new_root; ++k) {
    if (keep[k]) new_root = k;
  }
  if (!new_root) return OrderedTD::singleton({});

  std::vector<std::size_t> index(n, 0);
  std::vector<std::vector<VarId>> bags;
  std::vector<std::optional<std::size_t>> parents;
  for (std::size_t k = 0; k < n; ++k) {
    if (!keep[k]) continue;
    index[k] = bags.size();
    bags.push_back(td.bag(k));
    auto p = td.parent(k);
    while (p && !keep[*p]) p = td.parent(*p);
    if (k == *new_root) {
      parents.push_back(std::nullopt);
    } else {
      parents.push_back(p ? index[*p] : index[*new_root]);
    }
  }
  return OrderedTD(std::move(bags), std::move(parents));
}

ClftjPlan::ClftjPlan(const Query& q, const OrderedTD& td, std::vector<VarId> ordering)
    : join_(q, ordering), td_(contract_unowned_nodes(td)) {
  if (auto violation = validate_td(q, td)) throw PlanError("invalid tree decomposition: " + violation->message);
  if (td.variables().size() != q.num_vars()) throw PlanError("tree decomposition does not cover every variable");
  if (!is_strongly_compatible(td, ordering)) {
    throw PlanError("variable ordering is not strongly compatible with the tree decomposition");
  }
  blocks_ = owned_blocks(td_, ordering);
  adhesion_positions_.resize(td_.size());
  for (std::size_t k = 0; k < td_.size(); ++k) {
    for (VarId v : td_.adhesion(k)) adhesion_positions_[k].push_back(join_.position_of(v));
    std::sort(adhesion_positions_[k].begin(), adhesion_positions_[k].end());
  }
}

namespace {

/// Accumulates one node's fragment: nested unions over the node's owned
/// positions whose leaves hold the product of the children's fragments.
/// Matches arrive in lexicographic order, so only the last branch of each
/// union is ever extended.
class FragmentBuilder {
 public:
  void reset(std::size_t first_position, std::size_t end_position) {
    first_ = first_position;
    end_ = end_position;
    auto root = std::make_shared<FrNode>();
    root->kind = FrNode::Kind::kUnion;
    root->position = first_;
    open_.assign(1, root.get());
    root_ = std::move(root);
  }

  void add(std::span<const Value> values, FrRef leaf) {
    std::size_t depth = 0;
    for (std::size_t pos = first_; pos + 1 < end_; ++pos, ++depth) {
      FrNode* u = open_[depth];
      if (u->branches.empty() || u->branches.back().first != values[pos]) {
        auto child = std::make_shared<FrNode>();
        child->kind = FrNode::Kind::kUnion;
        child->position = pos + 1;
        open_.resize(depth + 1);
        open_.push_back(child.get());
        u->branches.emplace_back(values[pos], std::move(child));
      }
    }
    open_[depth]->branches.emplace_back(values[end_ - 1], std::move(leaf));
  }

  FrRef fragment() const { return root_; }

 private:
  std::size_t first_ = 0;
  std::size_t end_ = 0;
  FrRef root_;
  std::vector<FrNode*> open_;
};

bool is_empty_fragment(const FrRef& f) { return f->kind == FrNode::Kind::kUnion && f->branches.empty(); }

template <bool kEval>
class CachedTrieJoin {
  using Cached = std::conditional_t<kEval, FrRef, std::uint64_t>;

 public:
  CachedTrieJoin(const ClftjPlan& plan, const TrieCatalog& catalog, const CacheConfig& config,
                 const ExecutionLimits& limits, const ClftjHooks& hooks)
      : plan_(plan),
        blocks_(plan.blocks()),
        cursor_(plan.join_plan(), catalog, &stats_.engine.access),
        cache_(plan.td().size(), config),
        hooks_(hooks),
        guard_(limits),
        n_(plan.join_plan().num_vars()),
        intrmd_(plan.td().size(), 0),
        fragments_(kEval ? plan.td().size() : 0),
        builders_(kEval ? plan.td().size() : 0),
        key_scratch_(plan.td().size()) {}

  std::uint64_t run_count() {
    auto start = std::chrono::steady_clock::now();
    if (cursor_.bind_constants()) join(0, 1);
    finish(start);
    return total_;
  }

  FactorizedResult run_eval() {
    auto start = std::chrono::steady_clock::now();
    FactorizedResult result;
    result.arity = n_;
    bool bound = cursor_.bind_constants();
    if (n_ == 0) {
      ++stats_.engine.recursive_calls;
      result.root = bound ? FrNode::unit() : empty_union();
    } else {
      builders_[0].reset(blocks_.own_begin[0], blocks_.own_end[0]);
      if (bound) join(0, 1);
      result.root = builders_[0].fragment();
    }
    finish(start);
    return result;
  }

 private:
  static FrRef empty_union() {
    auto u = std::make_shared<FrNode>();
    u->kind = FrNode::Kind::kUnion;
    return u;
  }

  void finish(std::chrono::steady_clock::time_point start) {
    stats_.engine.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }

  std::span<const Value> adhesion_key(std::size_t node) {
    auto& key = key_scratch_[node];
    key.clear();
    for (std::size_t pos : plan_.adhesion_positions(node)) key.push_back(cursor_.value(pos));
    return key;
  }

  void reset_node(std::size_t v) {
    if constexpr (kEval) {
      builders_[v].reset(blocks_.own_begin[v], blocks_.own_end[v]);
    } else {
      intrmd_[v] = 0;
    }
  }

  void set_from_cache(std::size_t v, const Cached& value) {
    if constexpr (kEval) {
      fragments_[v] = value;
    } else {
      intrmd_[v] = value;
    }
  }

  Cached node_result(std::size_t v) {
    if constexpr (kEval) {
      return fragments_[v];
    } else {
      return intrmd_[v];
    }
  }

  static bool is_zero(const Cached& value) {
    if constexpr (kEval) {
      return is_empty_fragment(value);
    } else {
      return value == 0;
    }
  }

  std::uint64_t count_of(const Cached& value) {
    if constexpr (kEval) {
      return fr_count(FactorizedResult{value, n_});
    } else {
      return value;
    }
  }

  /// Adds the product of v's children's results for the current match of v's
  /// last owned variable.
  void accumulate(std::size_t v) {
    const auto& children = plan_.td().children(v);
    if constexpr (kEval) {
      FrRef leaf;
      if (children.empty()) {
        leaf = FrNode::unit();
      } else if (children.size() == 1) {
        leaf = fragments_[children[0]];
        if (is_empty_fragment(leaf)) return;
      } else {
        auto product = std::make_shared<FrNode>();
        product->kind = FrNode::Kind::kProduct;
        for (std::size_t c : children) {
          if (is_empty_fragment(fragments_[c])) return;
          product->factors.push_back(fragments_[c]);
        }
        leaf = std::move(product);
      }
      builders_[v].add(cursor_.values(), std::move(leaf));
    } else {
      std::uint64_t product = 1;
      for (std::size_t c : children) product = checked_mul(product, intrmd_[c]);
      intrmd_[v] = checked_add(intrmd_[v], product);
      if (hooks_.on_accumulate) hooks_.on_accumulate(v, product);
    }
  }

  void join(std::size_t d, std::uint64_t factor) {
    ++stats_.engine.recursive_calls;
    if (guard_.expired()) throw TimedOut(stats_.engine, total_);
    if (d == n_) {
      total_ = checked_add(total_, factor);
      return;
    }
    const std::size_t v = blocks_.owner_at[d];
    const bool entering = d > 0 && blocks_.owner_at[d - 1] != v;
    std::optional<Cached> expected;
    std::span<const Value> key;
    if (entering) {
      reset_node(v);
      key = adhesion_key(v);
      if (const Cached* hit = cache_.lookup(v, key)) {
        if (!cache_.config().shadow_verify) {
          Cached value = *hit;
          if (!is_zero(value)) {
            if constexpr (kEval) {
              join(blocks_.subtree_end[v], factor);
            } else {
              join(blocks_.subtree_end[v], checked_mul(factor, value));
            }
          }
          set_from_cache(v, value);
          return;
        }
        expected = *hit;
      }
    }

    const bool last_owned = d + 1 == blocks_.own_end[v];
    for (bool ok = cursor_.first(d); ok; ok = cursor_.next(d)) {
      ++stats_.engine.matches_enumerated;
      join(d + 1, factor);
      if (last_owned) accumulate(v);
    }
    cursor_.close(d);

    if (!entering) return;
    if constexpr (kEval) fragments_[v] = builders_[v].fragment();
    key = adhesion_key(v);
    if (expected) {
      ++stats_.cache_shadow_checks;
      if (count_of(*expected) != count_of(node_result(v))) {
        throw ContractViolation("cache hit disagrees with recomputation at TD node " + std::to_string(v));
      }
      return;
    }
    if (cache_.should_cache(v, key)) {
      Cached value = node_result(v);
      if constexpr (!kEval) {
        if (hooks_.on_insert) hooks_.on_insert(v, key, value);
      }
      cache_.insert(v, key, std::move(value));
    }
  }

  ClftjStats stats() const {
    ClftjStats s{stats_.engine, cache_.counters()};
    s.cache.shadow_checks = stats_.cache_shadow_checks;
    return s;
  }

  struct Stats {
    EngineStats engine;
    std::uint64_t cache_shadow_checks = 0;
  };

 public:
  ClftjStats final_stats() const { return stats(); }

 private:
  const ClftjPlan& plan_;
  const OwnedBlocks& blocks_;
  Stats stats_;
  JoinCursor cursor_;
  CacheTable<Cached> cache_;
  const ClftjHooks& hooks_;
  DeadlineGuard guard_;
  std::size_t n_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> intrmd_;
  std::vector<FrRef> fragments_;
  std::vector<FragmentBuilder> builders_;
  std::vector<std::vector<Value>> key_scratch_;
};

}  // namespace

ClftjCountResult cached_tj_count(const ClftjPlan& plan, const TrieCatalog& catalog, const CacheConfig& config,
                                 const ExecutionLimits& limits, const ClftjHooks& hooks) {
  CachedTrieJoin<false> engine(plan, catalog, config, limits, hooks);
  std::uint64_t count = engine.run_count();
  return {count, engine.final_stats()};
}

ClftjEvalResult cached_tj_eval(const ClftjPlan& plan, const TrieCatalog& catalog, const CacheConfig& config,
                               const ExecutionLimits& limits) {
  ClftjHooks hooks;
  CachedTrieJoin<true> engine(plan, catalog, config, limits, hooks);
  FactorizedResult result = engine.run_eval();
  return {std::move(result), engine.final_stats()};
}

}  // namespace cltj
