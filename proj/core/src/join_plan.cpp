#include "cltj/join_plan.hpp"

#include <algorithm>
#include <numeric>

#include "cltj/error.hpp"

namespace cltj {

JoinPlan::JoinPlan(Query query, std::vector<VarId> ordering)
    : query_(std::move(query)), ordering_(std::move(ordering)) {
  const std::size_t n = query_.num_vars();
  if (ordering_.size() != n) throw PlanError("ordering must list every query variable exactly once");
  position_.assign(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    VarId v = ordering_[i];
    if (v >= n || position_[v] != n) throw PlanError("ordering is not a permutation of the query variables");
    position_[v] = i;
  }

  positions_.resize(n);
  for (std::size_t a = 0; a < query_.atoms().size(); ++a) {
    const Atom& atom = query_.atoms()[a];
    AtomPlan plan;
    plan.relation = atom.relation;
    std::vector<std::size_t> constant_cols;
    std::vector<std::pair<std::size_t, std::size_t>> var_cols;  // (position, column)
    for (std::size_t c = 0; c < atom.terms.size(); ++c) {
      const Term& t = atom.terms[c];
      if (t.is_constant()) {
        constant_cols.push_back(c);
      } else {
        var_cols.emplace_back(position_[t.var()], c);
      }
    }
    std::sort(var_cols.begin(), var_cols.end());
    for (std::size_t c : constant_cols) {
      plan.column_order.push_back(c);
      plan.levels.push_back({Level::Kind::kConstant, atom.terms[c].constant_value(), 0});
    }
    plan.num_constant_levels = constant_cols.size();
    for (std::size_t i = 0; i < var_cols.size(); ++i) {
      auto [pos, col] = var_cols[i];
      plan.column_order.push_back(col);
      bool repeat = i > 0 && var_cols[i - 1].first == pos;
      plan.levels.push_back({repeat ? Level::Kind::kRepeat : Level::Kind::kVariable, 0, pos});
      (repeat ? positions_[pos].repeats : positions_[pos].participants).push_back(a);
    }
    atoms_.push_back(std::move(plan));
  }
  for (std::size_t d = 0; d < n; ++d) {
    CLTJ_EXPECT(!positions_[d].participants.empty());
  }
}

std::vector<VarId> identity_ordering(const Query& q) {
  std::vector<VarId> order(q.num_vars());
  std::iota(order.begin(), order.end(), VarId{0});
  return order;
}

TrieCatalog TrieCatalog::build(const Database& db, const JoinPlan& plan) {
  TrieCatalog catalog;
  for (const auto& atom : plan.atoms()) {
    const Relation& rel = db.at(atom.relation);
    if (rel.arity() != atom.column_order.size()) {
      throw SchemaError("relation " + atom.relation + " has arity " + std::to_string(rel.arity()) +
                        " but the query uses arity " + std::to_string(atom.column_order.size()));
    }
    catalog.add(rel, atom.column_order);
  }
  return catalog;
}

void TrieCatalog::add(const Relation& relation, std::span<const std::size_t> column_order) {
  auto& list = tries_[relation.name()];
  for (const auto& t : list) {
    if (std::equal(t->column_order().begin(), t->column_order().end(), column_order.begin(),
                   column_order.end())) {
      return;
    }
  }
  list.push_back(std::make_shared<const TrieIndex>(TrieIndex::build(relation, column_order)));
}

const TrieIndex& TrieCatalog::get(const std::string& relation,
                                  std::span<const std::size_t> column_order) const {
  auto it = tries_.find(relation);
  if (it == tries_.end()) throw SchemaError("missing relation " + relation);
  for (const auto& t : it->second) {
    if (std::equal(t->column_order().begin(), t->column_order().end(), column_order.begin(),
                   column_order.end())) {
      return *t;
    }
  }
  throw SchemaError("no trie for relation " + relation + " with the required level order");
}

std::size_t TrieCatalog::num_tries() const noexcept {
  std::size_t n = 0;
  for (const auto& [name, list] : tries_) n += list.size();
  return n;
}

JoinCursor::JoinCursor(const JoinPlan& plan, const TrieCatalog& catalog, AccessCounters* counters)
    : plan_(&plan),
      participants_(plan.num_vars()),
      joins_(plan.num_vars()),
      repeats_open_(plan.num_vars(), 0),
      values_(plan.num_vars(), 0) {
  iterators_.reserve(plan.atoms().size());
  for (const auto& atom : plan.atoms()) {
    iterators_.emplace_back(catalog.get(atom.relation, atom.column_order), counters);
  }
  for (std::size_t d = 0; d < plan.num_vars(); ++d) {
    for (std::size_t a : plan.at_position(d).participants) participants_[d].push_back(&iterators_[a]);
  }
}

bool JoinCursor::bind_constants() {
  for (std::size_t a = 0; a < iterators_.size(); ++a) {
    const auto& atom = plan_->atoms()[a];
    TrieIterator& it = iterators_[a];
    for (std::size_t l = 0; l < atom.num_constant_levels; ++l) {
      Value c = atom.levels[l].constant;
      it.open();
      if (it.at_end()) return false;
      if (it.key() < c) it.seek(c);
      if (it.at_end() || it.key() != c) return false;
    }
  }
  return true;
}

bool JoinCursor::first(std::size_t d) {
  for (TrieIterator* it : participants_[d]) it->open();
  joins_[d].init(participants_[d]);
  return settle(d);
}

bool JoinCursor::next(std::size_t d) {
  drop_repeats(d);
  joins_[d].next();
  return settle(d);
}

void JoinCursor::close(std::size_t d) {
  drop_repeats(d);
  for (TrieIterator* it : participants_[d]) it->up();
}

bool JoinCursor::settle(std::size_t d) {
  LeapfrogJoin& join = joins_[d];
  while (!join.at_end()) {
    Value v = join.key();
    if (check_repeats(d, v)) {
      values_[d] = v;
      return true;
    }
    join.next();
  }
  return false;
}

bool JoinCursor::check_repeats(std::size_t d, Value v) {
  for (std::size_t a : plan_->at_position(d).repeats) {
    TrieIterator& it = iterators_[a];
    it.open();
    ++repeats_open_[d];
    if (!it.at_end() && it.key() < v) it.seek(v);
    if (it.at_end() || it.key() != v) {
      drop_repeats(d);
      return false;
    }
  }
  return true;
}

void JoinCursor::drop_repeats(std::size_t d) {
  const auto& repeats = plan_->at_position(d).repeats;
  while (repeats_open_[d] > 0) {
    --repeats_open_[d];
    iterators_[repeats[repeats_open_[d]]].up();
  }
}

}  // namespace cltj
