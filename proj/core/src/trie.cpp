#include "cltj/trie.hpp"

#include <algorithm>
#include <numeric>

#include "cltj/error.hpp"

namespace cltj {

TrieIndex TrieIndex::build(const Relation& relation, std::span<const std::size_t> column_order) {
  const std::size_t arity = relation.arity();
  if (column_order.size() != arity) throw Error("column order length differs from arity");
  std::vector<bool> seen(arity, false);
  for (std::size_t c : column_order) {
    if (c >= arity || seen[c]) throw Error("column order is not a permutation");
    seen[c] = true;
  }

  const std::size_t n = relation.size();
  std::vector<Value> rows(n * arity);
  for (std::size_t r = 0; r < n; ++r) {
    auto t = relation.tuple(r);
    for (std::size_t i = 0; i < arity; ++i) rows[r * arity + i] = t[column_order[i]];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto row = [&](std::size_t r) { return std::span<const Value>(rows.data() + r * arity, arity); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ra = row(a), rb = row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) {
                            auto ra = row(a), rb = row(b);
                            return std::equal(ra.begin(), ra.end(), rb.begin());
                          }),
              order.end());

  TrieIndex trie;
  trie.column_order_.assign(column_order.begin(), column_order.end());
  trie.levels_.resize(arity);
  // first_diff[k]: first column where sorted row k differs from row k-1.
  std::vector<std::size_t> first_diff(order.size(), 0);
  for (std::size_t k = 1; k < order.size(); ++k) {
    auto a = row(order[k - 1]), b = row(order[k]);
    std::size_t i = 0;
    while (i < arity && a[i] == b[i]) ++i;
    first_diff[k] = i;
  }
  for (std::size_t level = 0; level < arity; ++level) {
    Level& lv = trie.levels_[level];
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k == 0 || first_diff[k] <= level) {
        lv.keys.push_back(row(order[k])[level]);
      }
    }
  }
  for (std::size_t level = 0; level + 1 < arity; ++level) {
    Level& lv = trie.levels_[level];
    lv.child_begin.reserve(lv.keys.size() + 1);
    std::uint32_t child = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      bool new_parent = k == 0 || first_diff[k] <= level;
      bool new_child = k == 0 || first_diff[k] <= level + 1;
      if (new_parent) lv.child_begin.push_back(child);
      if (new_child) ++child;
    }
    lv.child_begin.push_back(child);
  }
  return trie;
}

std::pair<std::size_t, std::size_t> TrieIndex::children(std::size_t level, std::size_t index) const {
  const Level& lv = levels_.at(level);
  CLTJ_EXPECT(level + 1 < levels_.size() && index < lv.keys.size());
  return {lv.child_begin[index], lv.child_begin[index + 1]};
}

std::vector<std::vector<Value>> TrieIndex::paths() const {
  std::vector<std::vector<Value>> out;
  if (levels_.empty()) return out;
  std::vector<Value> prefix;
  auto walk = [&](auto&& self, std::size_t level, std::size_t begin, std::size_t end) -> void {
    for (std::size_t i = begin; i < end; ++i) {
      prefix.push_back(levels_[level].keys[i]);
      if (level + 1 == levels_.size()) {
        out.push_back(prefix);
      } else {
        auto [b, e] = children(level, i);
        self(self, level + 1, b, e);
      }
      prefix.pop_back();
    }
  };
  walk(walk, 0, 0, levels_[0].keys.size());
  return out;
}

TrieIterator::TrieIterator(const TrieIndex& trie, AccessCounters* counters)
    : trie_(&trie), counters_(counters), pos_(trie.depth()), end_(trie.depth()) {}

void TrieIterator::open() {
  CLTJ_EXPECT(depth_ < trie_->depth());
  std::size_t begin = 0, end = 0;
  if (depth_ == 0) {
    end = trie_->levels_[0].keys.size();
  } else {
    CLTJ_EXPECT(!at_end());
    const auto& lv = trie_->levels_[depth_ - 1];
    begin = lv.child_begin[pos_[depth_ - 1]];
    end = lv.child_begin[pos_[depth_ - 1] + 1];
  }
  pos_[depth_] = begin;
  end_[depth_] = end;
  ++depth_;
  if (counters_) ++counters_->opens;
}

void TrieIterator::up() {
  CLTJ_EXPECT(depth_ >= 1);
  --depth_;
  if (counters_) ++counters_->ups;
}

void TrieIterator::next() {
  CLTJ_EXPECT(depth_ >= 1 && !at_end());
  ++pos_[depth_ - 1];
  if (counters_) ++counters_->nexts;
}

void TrieIterator::seek(Value bound) {
  CLTJ_EXPECT(depth_ >= 1 && !at_end());
  const std::size_t d = depth_ - 1;
  const auto& keys = trie_->levels_[d].keys;
  CLTJ_EXPECT(bound >= keys[pos_[d]]);
  auto first = keys.begin() + static_cast<std::ptrdiff_t>(pos_[d]);
  auto last = keys.begin() + static_cast<std::ptrdiff_t>(end_[d]);
  pos_[d] = static_cast<std::size_t>(std::lower_bound(first, last, bound) - keys.begin());
  if (counters_) ++counters_->seeks;
}

Value TrieIterator::key() const {
  CLTJ_EXPECT(depth_ >= 1 && !at_end());
  return trie_->levels_[depth_ - 1].keys[pos_[depth_ - 1]];
}

bool TrieIterator::at_end() const {
  CLTJ_EXPECT(depth_ >= 1);
  return pos_[depth_ - 1] == end_[depth_ - 1];
}

}  // namespace cltj
