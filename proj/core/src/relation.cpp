#include "cltj/relation.hpp"

#include <algorithm>
#include <numeric>

#include "cltj/error.hpp"

namespace cltj {

Relation::Relation(std::string name, std::size_t arity) : name_(std::move(name)), arity_(arity) {
  if (arity_ == 0) throw Error("relation " + name_ + " must have positive arity");
}

void Relation::add(std::span<const Value> tuple) {
  if (tuple.size() != arity_) {
    throw DataError("tuple of length " + std::to_string(tuple.size()) + " added to " + name_ +
                    " of arity " + std::to_string(arity_));
  }
  data_.insert(data_.end(), tuple.begin(), tuple.end());
}

void Relation::sort_and_dedup() {
  std::vector<std::size_t> rows(size());
  std::iota(rows.begin(), rows.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    auto ta = tuple(a), tb = tuple(b);
    return std::lexicographical_compare(ta.begin(), ta.end(), tb.begin(), tb.end());
  };
  std::sort(rows.begin(), rows.end(), less);
  std::vector<Value> out;
  out.reserve(data_.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto t = tuple(rows[i]);
    if (i > 0) {
      auto prev = tuple(rows[i - 1]);
      if (std::equal(t.begin(), t.end(), prev.begin())) continue;
    }
    out.insert(out.end(), t.begin(), t.end());
  }
  data_ = std::move(out);
}

void Database::add(Relation relation) {
  std::string name = relation.name();
  relations_.insert_or_assign(std::move(name), std::move(relation));
}

const Relation* Database::find(const std::string& name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

const Relation& Database::at(const std::string& name) const {
  const Relation* r = find(name);
  if (r == nullptr) throw SchemaError("missing relation " + name);
  return *r;
}

}  // namespace cltj
