#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cltj/relation.hpp"

namespace cltj {

/// Work counters bumped by trie iterators. Engines expose these in their stats.
struct AccessCounters {
  std::uint64_t opens = 0;
  std::uint64_t ups = 0;
  std::uint64_t nexts = 0;
  std::uint64_t seeks = 0;

  AccessCounters& operator+=(const AccessCounters& o) {
    opens += o.opens;
    ups += o.ups;
    nexts += o.nexts;
    seeks += o.seeks;
    return *this;
  }
  friend bool operator==(const AccessCounters&, const AccessCounters&) = default;
};

/// Sorted trie over one relation for a fixed column order, stored as
/// cascading sorted arrays: level i holds the keys of all depth-(i+1) nodes,
/// grouped by parent, and `child_begin` maps each key to its children's range
/// in level i+1. Immutable after build.
class TrieIndex {
 public:
  /// `column_order[i]` is the relation column stored at trie level i.
  /// Duplicate tuples collapse to one path.
  static TrieIndex build(const Relation& relation, std::span<const std::size_t> column_order);

  std::size_t depth() const noexcept { return levels_.size(); }
  const std::vector<std::size_t>& column_order() const noexcept { return column_order_; }
  /// Number of distinct tuples (= root-to-leaf paths).
  std::size_t num_tuples() const noexcept { return levels_.empty() ? 0 : levels_.back().keys.size(); }

  std::span<const Value> level_keys(std::size_t level) const { return levels_.at(level).keys; }
  /// Child range, in level `level + 1`, of entry `index` of level `level`.
  std::pair<std::size_t, std::size_t> children(std::size_t level, std::size_t index) const;

  /// Every root-to-leaf path, in lexicographic order.
  std::vector<std::vector<Value>> paths() const;

 private:
  friend class TrieIterator;

  struct Level {
    std::vector<Value> keys;
    std::vector<std::uint32_t> child_begin;  // size keys+1; empty on the last level
  };

  std::vector<std::size_t> column_order_;
  std::vector<Level> levels_;
};

/// Level iterator over a TrieIndex (LFTJ's linear iterator extended with
/// open/up). Depth 0 is the root; open() descends to the first child.
/// Protocol misuse throws ContractViolation.
class TrieIterator {
 public:
  explicit TrieIterator(const TrieIndex& trie, AccessCounters* counters = nullptr);

  void open();
  void up();
  void next();
  /// Positions at the least sibling >= bound; requires bound >= key().
  void seek(Value bound);

  Value key() const;
  bool at_end() const;
  std::size_t depth() const noexcept { return depth_; }
  const TrieIndex& trie() const noexcept { return *trie_; }

 private:
  const TrieIndex* trie_;
  AccessCounters* counters_;
  std::size_t depth_ = 0;
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> end_;
};

}  // namespace cltj
