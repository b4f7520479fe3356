#pragma once

#include <span>
#include <vector>

#include "cltj/trie.hpp"

namespace cltj {

/// Unary leapfrog intersection over iterators that are open at the level
/// being joined. Yields the common keys in strictly ascending order.
class LeapfrogJoin {
 public:
  LeapfrogJoin() = default;

  /// Resets over `iterators` (not owned; at least one) and moves to the first
  /// common key.
  void init(std::span<TrieIterator* const> iterators);
  void next();
  bool at_end() const noexcept { return at_end_; }
  Value key() const noexcept { return key_; }

 private:
  void search();

  std::vector<TrieIterator*> iters_;
  std::size_t p_ = 0;
  Value key_ = 0;
  bool at_end_ = true;
};

/// Convenience: drains a leapfrog join over `iterators` into a vector.
std::vector<Value> leapfrog_intersect(std::span<TrieIterator* const> iterators);

}  // namespace cltj
