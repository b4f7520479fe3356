#include "cltj/ytd.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "cltj/cache.hpp"
#include "cltj/error.hpp"

namespace cltj {

namespace {

using Key = std::vector<Value>;
using KeySet = std::unordered_set<Key, detail::KeyHash>;

/// Materialized bag: schema lists adhesion variables first, rows are sorted.
struct BagRelation {
  std::vector<VarId> schema;
  std::vector<std::size_t> adhesion_cols;  // columns of adhesion(node), ascending variable id
  std::vector<std::vector<Value>> rows;
};

Key project(const std::vector<Value>& row, const std::vector<std::size_t>& cols) {
  Key k;
  k.reserve(cols.size());
  for (std::size_t c : cols) k.push_back(row[c]);
  return k;
}

void add_stats(EngineStats& into, const EngineStats& s) {
  into.recursive_calls += s.recursive_calls;
  into.matches_enumerated += s.matches_enumerated;
  into.access += s.access;
}

class Ytd {
 public:
  Ytd(const Query& q, const OrderedTD& td, const Database& db, const ExecutionLimits& limits)
      : q_(q), td_(td), db_(db), limits_(limits), guard_(limits) {
    if (auto violation = validate_td(q, td)) throw PlanError("invalid tree decomposition: " + violation->message);
    if (td.variables().size() != q.num_vars()) throw PlanError("tree decomposition does not cover every variable");
    materialize();
    stats_.pairwise = td_.size() == 2;
    if (!stats_.pairwise && td_.size() > 2) reduce();
  }

  std::uint64_t count() {
    const std::size_t n = td_.size();
    // weight[k] maps adhesion key of node k to the summed weight of its rows
    std::vector<std::unordered_map<Key, std::uint64_t, detail::KeyHash>> weight(n);
    std::uint64_t total = 0;
    for (std::size_t k = n; k-- > 0;) {
      const BagRelation& b = bags_[k];
      for (const auto& row : b.rows) {
        tick();
        std::uint64_t w = 1;
        for (std::size_t c : td_.children(k)) {
          auto it = weight[c].find(project(row, child_cols_[c]));
          w = it == weight[c].end() ? 0 : checked_mul(w, it->second);
          if (w == 0) break;
        }
        if (w == 0) continue;
        if (k == 0) {
          total = checked_add(total, w);
        } else {
          auto& slot = weight[k][project(row, b.adhesion_cols)];
          slot = checked_add(slot, w);
        }
      }
      for (std::size_t c : td_.children(k)) weight[c].clear();
    }
    return total;
  }

  void eval(const TupleSink& sink) {
    const std::size_t n = td_.size();
    ranges_.assign(n, {});
    for (std::size_t k = 1; k < n; ++k) {
      const BagRelation& b = bags_[k];
      for (std::size_t i = 0; i < b.rows.size(); ++i) {
        auto [it, inserted] = ranges_[k].try_emplace(project(b.rows[i], b.adhesion_cols), i, i);
        it->second.second = i + 1;
      }
    }
    assignment_.assign(q_.num_vars(), 0);
    emit(0, sink);
  }

  const YtdStats& stats() const { return stats_; }

 private:
  void tick() {
    if (guard_.expired()) throw TimedOut(stats_.engine, 0);
  }

  void materialize() {
    const std::size_t n = td_.size();
    std::vector<std::vector<std::size_t>> assigned(n);
    for (std::size_t a = 0; a < q_.atoms().size(); ++a) {
      std::vector<VarId> vars = q_.atoms()[a].variables();
      for (std::size_t k = 0; k < n; ++k) {
        const auto& b = td_.bag_set(k);
        if (std::includes(b.begin(), b.end(), vars.begin(), vars.end())) {
          assigned[k].push_back(a);
          break;
        }
      }
    }
    bags_.resize(n);
    child_cols_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      materialize_bag(k, assigned[k]);
      stats_.peak_intermediate_tuples += bags_[k].rows.size();
    }
    for (std::size_t k = 1; k < n; ++k) {
      // adhesion columns of k inside its parent's schema, same variable order
      const BagRelation& parent = bags_[*td_.parent(k)];
      for (VarId v : td_.adhesion(k)) {
        child_cols_[k].push_back(
            static_cast<std::size_t>(std::find(parent.schema.begin(), parent.schema.end(), v) - parent.schema.begin()));
      }
    }
    record_sizes();
  }

  void materialize_bag(std::size_t k, const std::vector<std::size_t>& atoms) {
    BagRelation& bag = bags_[k];
    const auto& adhesion = td_.adhesion(k);
    bag.schema = adhesion;
    for (VarId v : td_.bag(k)) {
      if (!std::binary_search(adhesion.begin(), adhesion.end(), v)) bag.schema.push_back(v);
    }
    for (std::size_t i = 0; i < adhesion.size(); ++i) bag.adhesion_cols.push_back(i);

    std::vector<VarId> local(q_.num_vars(), 0);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < bag.schema.size(); ++i) {
      local[bag.schema[i]] = static_cast<VarId>(i);
      names.push_back(q_.var_name(bag.schema[i]));
    }
    auto localize = [&](const Atom& a) {
      Atom out{a.relation, {}};
      for (const Term& t : a.terms) out.terms.push_back(t.is_variable() ? Term::variable(local[t.var()]) : t);
      return out;
    };

    std::vector<Atom> sub_atoms;
    std::vector<bool> covered(bag.schema.size(), false);
    for (std::size_t a : atoms) {
      sub_atoms.push_back(localize(q_.atoms()[a]));
      for (VarId v : q_.atoms()[a].variables()) covered[local[v]] = true;
    }
    std::vector<Relation> derived;
    const auto& bag_set = td_.bag_set(k);
    for (std::size_t i = 0; i < bag.schema.size(); ++i) {
      if (covered[i]) continue;
      const VarId x = bag.schema[i];
      const Atom* inside = nullptr;
      const Atom* touching = nullptr;
      for (const Atom& a : q_.atoms()) {
        std::vector<VarId> vars = a.variables();
        if (!std::binary_search(vars.begin(), vars.end(), x)) continue;
        if (std::includes(bag_set.begin(), bag_set.end(), vars.begin(), vars.end())) {
          inside = &a;
          break;
        }
        if (!touching) touching = &a;
      }
      std::vector<VarId> newly;
      if (inside) {
        sub_atoms.push_back(localize(*inside));
        newly = inside->variables();
      } else {
        derived.push_back(projection(*touching, bag_set, derived.size() + 1000 * k));
        Atom p{derived.back().name(), {}};
        for (VarId v : touching->variables()) {
          if (std::binary_search(bag_set.begin(), bag_set.end(), v)) {
            p.terms.push_back(Term::variable(local[v]));
            newly.push_back(v);
          }
        }
        sub_atoms.push_back(std::move(p));
      }
      for (VarId v : newly) covered[local[v]] = true;
    }

    if (sub_atoms.empty()) {
      bag.rows.push_back({});
      return;
    }
    std::vector<VarId> ordering(bag.schema.size());
    for (std::size_t i = 0; i < ordering.size(); ++i) ordering[i] = static_cast<VarId>(i);
    JoinPlan plan(Query(std::move(sub_atoms), std::move(names)), std::move(ordering));
    TrieCatalog catalog;
    for (const auto& ap : plan.atoms()) {
      const Relation* rel = nullptr;
      for (const Relation& d : derived) {
        if (d.name() == ap.relation) rel = &d;
      }
      if (!rel) rel = &db_.at(ap.relation);
      if (rel->arity() != ap.column_order.size()) {
        throw SchemaError("relation " + ap.relation + " has arity " + std::to_string(rel->arity()) +
                          " but the query uses arity " + std::to_string(ap.column_order.size()));
      }
      catalog.add(*rel, ap.column_order);
    }
    auto s = tj_eval(plan, catalog, [&](std::span<const Value> t) { bag.rows.emplace_back(t.begin(), t.end()); },
                     limits_);
    add_stats(stats_.engine, s);
  }

  /// Distinct values of `atom`'s variables inside `bag_set`, over its matches.
  Relation projection(const Atom& atom, const std::vector<VarId>& bag_set, std::size_t id) {
    std::vector<VarId> vars = atom.variables();
    std::vector<VarId> local(q_.num_vars(), 0);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      local[vars[i]] = static_cast<VarId>(i);
      names.push_back(q_.var_name(vars[i]));
    }
    Atom a{atom.relation, {}};
    for (const Term& t : atom.terms) a.terms.push_back(t.is_variable() ? Term::variable(local[t.var()]) : t);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (std::binary_search(bag_set.begin(), bag_set.end(), vars[i])) keep.push_back(i);
    }
    JoinPlan plan(Query({a}, names), identity_ordering(Query({a}, names)));
    TrieCatalog catalog = TrieCatalog::build(db_, plan);
    Relation out("$projection" + std::to_string(id), keep.size());
    std::vector<Value> row(keep.size());
    auto s = tj_eval(
        plan, catalog,
        [&](std::span<const Value> t) {
          for (std::size_t i = 0; i < keep.size(); ++i) row[i] = t[keep[i]];
          out.add(row);
        },
        limits_);
    add_stats(stats_.engine, s);
    out.sort_and_dedup();
    return out;
  }

  /// Keeps rows of `target` whose `target_cols` projection occurs in `source`.
  void semijoin(BagRelation& target, const std::vector<std::size_t>& target_cols, const BagRelation& source,
                const std::vector<std::size_t>& source_cols) {
    KeySet keys;
    for (const auto& row : source.rows) {
      tick();
      keys.insert(project(row, source_cols));
    }
    std::erase_if(target.rows, [&](const auto& row) { return !keys.contains(project(row, target_cols)); });
  }

  void reduce() {
    const std::size_t n = td_.size();
    for (std::size_t k = n; k-- > 1;) {
      semijoin(bags_[*td_.parent(k)], child_cols_[k], bags_[k], bags_[k].adhesion_cols);
    }
    record_sizes();
    for (std::size_t k = 1; k < n; ++k) {
      semijoin(bags_[k], bags_[k].adhesion_cols, bags_[*td_.parent(k)], child_cols_[k]);
    }
    record_sizes();
  }

  void record_sizes() {
    std::vector<std::uint64_t> sizes;
    for (const auto& b : bags_) sizes.push_back(b.rows.size());
    stats_.bag_sizes.push_back(std::move(sizes));
  }

  void emit(std::size_t k, const TupleSink& sink) {
    if (k == td_.size()) {
      sink(assignment_);
      return;
    }
    const BagRelation& b = bags_[k];
    std::size_t begin = 0;
    std::size_t end = b.rows.size();
    if (k > 0) {
      Key key;
      for (VarId v : td_.adhesion(k)) key.push_back(assignment_[v]);
      auto it = ranges_[k].find(key);
      if (it == ranges_[k].end()) return;
      std::tie(begin, end) = it->second;
    }
    for (std::size_t i = begin; i < end; ++i) {
      tick();
      for (std::size_t c = 0; c < b.schema.size(); ++c) assignment_[b.schema[c]] = b.rows[i][c];
      emit(k + 1, sink);
    }
  }

  const Query& q_;
  const OrderedTD& td_;
  const Database& db_;
  ExecutionLimits limits_;
  DeadlineGuard guard_;
  YtdStats stats_;
  std::vector<BagRelation> bags_;
  std::vector<std::vector<std::size_t>> child_cols_;
  std::vector<std::unordered_map<Key, std::pair<std::size_t, std::size_t>, detail::KeyHash>> ranges_;
  std::vector<Value> assignment_;
};

}  // namespace

YtdCountResult ytd_count(const Query& q, const OrderedTD& td, const Database& db, const ExecutionLimits& limits) {
  auto start = std::chrono::steady_clock::now();
  Ytd y(q, td, db, limits);
  std::uint64_t count = y.count();
  YtdCountResult out{count, y.stats()};
  out.stats.engine.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

YtdStats ytd_eval(const Query& q, const OrderedTD& td, const Database& db, const TupleSink& sink,
                  const ExecutionLimits& limits) {
  auto start = std::chrono::steady_clock::now();
  Ytd y(q, td, db, limits);
  y.eval(sink);
  YtdStats out = y.stats();
  out.engine.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<std::vector<Value>> ytd_eval_all(const Query& q, const OrderedTD& td, const Database& db) {
  std::vector<std::vector<Value>> out;
  ytd_eval(q, td, db, [&](std::span<const Value> t) { out.emplace_back(t.begin(), t.end()); });
  return out;
}

}  // namespace cltj
