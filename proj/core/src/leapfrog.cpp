#include "cltj/leapfrog.hpp"

#include <algorithm>

#include "cltj/error.hpp"

namespace cltj {

void LeapfrogJoin::init(std::span<TrieIterator* const> iterators) {
  CLTJ_EXPECT(!iterators.empty());
  iters_.assign(iterators.begin(), iterators.end());
  at_end_ = std::any_of(iters_.begin(), iters_.end(), [](const TrieIterator* it) { return it->at_end(); });
  if (at_end_) return;
  std::sort(iters_.begin(), iters_.end(),
            [](const TrieIterator* a, const TrieIterator* b) { return a->key() < b->key(); });
  p_ = 0;
  search();
}

void LeapfrogJoin::search() {
  const std::size_t k = iters_.size();
  Value max_key = iters_[(p_ + k - 1) % k]->key();
  while (true) {
    Value least = iters_[p_]->key();
    if (least == max_key) {
      key_ = least;
      return;
    }
    iters_[p_]->seek(max_key);
    if (iters_[p_]->at_end()) {
      at_end_ = true;
      return;
    }
    max_key = iters_[p_]->key();
    p_ = (p_ + 1) % k;
  }
}

void LeapfrogJoin::next() {
  CLTJ_EXPECT(!at_end_);
  iters_[p_]->next();
  if (iters_[p_]->at_end()) {
    at_end_ = true;
    return;
  }
  p_ = (p_ + 1) % iters_.size();
  search();
}

std::vector<Value> leapfrog_intersect(std::span<TrieIterator* const> iterators) {
  std::vector<Value> out;
  LeapfrogJoin join;
  for (join.init(iterators); !join.at_end(); join.next()) out.push_back(join.key());
  return out;
}

}  // namespace cltj
