#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cltj/leapfrog.hpp"
#include "cltj/query.hpp"
#include "cltj/relation.hpp"
#include "cltj/trie.hpp"

namespace cltj {

/// A query bound to a global variable ordering. Each atom's trie stores its
/// constant columns first, then its variable columns by ordering position, so
/// a variable's trie level always lies below the levels of earlier variables.
class JoinPlan {
 public:
  struct Level {
    enum class Kind { kConstant, kVariable, kRepeat };
    Kind kind;
    Value constant = 0;        // kConstant
    std::size_t position = 0;  // kVariable / kRepeat: ordering position
  };

  struct AtomPlan {
    std::string relation;
    std::vector<std::size_t> column_order;
    std::vector<Level> levels;
    std::size_t num_constant_levels = 0;
  };

  /// Iterators taking part in the leapfrog for one ordering position, plus
  /// atoms needing an equality check for a repeated occurrence.
  struct PositionPlan {
    std::vector<std::size_t> participants;
    std::vector<std::size_t> repeats;
  };

  /// `ordering` must be a permutation of the query's variables.
  JoinPlan(Query query, std::vector<VarId> ordering);

  const Query& query() const noexcept { return query_; }
  std::size_t num_vars() const noexcept { return ordering_.size(); }
  std::span<const VarId> ordering() const noexcept { return ordering_; }
  std::size_t position_of(VarId var) const { return position_.at(var); }
  const std::vector<AtomPlan>& atoms() const noexcept { return atoms_; }
  const PositionPlan& at_position(std::size_t d) const { return positions_.at(d); }

 private:
  Query query_;
  std::vector<VarId> ordering_;
  std::vector<std::size_t> position_;
  std::vector<AtomPlan> atoms_;
  std::vector<PositionPlan> positions_;
};

/// Ordering by ascending variable id.
std::vector<VarId> identity_ordering(const Query& q);

/// Tries keyed by (relation, column order); shared by atoms that agree on both.
class TrieCatalog {
 public:
  /// Builds every trie `plan` needs. Throws SchemaError for a missing relation
  /// or an arity mismatch.
  static TrieCatalog build(const Database& db, const JoinPlan& plan);

  void add(const Relation& relation, std::span<const std::size_t> column_order);

  /// Throws SchemaError if the relation is absent or lacks this column order.
  const TrieIndex& get(const std::string& relation, std::span<const std::size_t> column_order) const;

  std::size_t num_tries() const noexcept;

 private:
  std::map<std::string, std::vector<std::shared_ptr<const TrieIndex>>> tries_;
};

/// Per-execution iterator state implementing "all matching values for x_d
/// under the current prefix". Shared by the LFTJ and CLFTJ engines so both
/// do identical trie work for identical traversals.
class JoinCursor {
 public:
  JoinCursor(const JoinPlan& plan, const TrieCatalog& catalog, AccessCounters* counters);

  /// Descends every atom through its constant levels. False if some
  /// constant is absent, in which case the result is empty.
  bool bind_constants();

  /// Opens position d and moves to its first match. Whatever the result,
  /// close(d) must follow.
  bool first(std::size_t d);
  bool next(std::size_t d);
  Value value(std::size_t d) const { return values_[d]; }
  void close(std::size_t d);

  std::span<const Value> values() const noexcept { return values_; }

 private:
  bool settle(std::size_t d);
  bool check_repeats(std::size_t d, Value v);
  void drop_repeats(std::size_t d);

  const JoinPlan* plan_;
  std::vector<TrieIterator> iterators_;
  std::vector<std::vector<TrieIterator*>> participants_;
  std::vector<LeapfrogJoin> joins_;
  std::vector<std::size_t> repeats_open_;
  std::vector<Value> values_;
};

}  // namespace cltj
