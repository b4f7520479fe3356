#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cltj/query.hpp"

namespace cltj {

/// A named relation of fixed arity; tuples are stored row-major.
class Relation {
 public:
  Relation(std::string name, std::size_t arity);

  const std::string& name() const noexcept { return name_; }
  std::size_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return data_.size() / arity_; }
  bool empty() const noexcept { return data_.empty(); }

  void add(std::span<const Value> tuple);
  void add(std::initializer_list<Value> tuple) { add(std::span<const Value>(tuple.begin(), tuple.size())); }
  std::span<const Value> tuple(std::size_t i) const { return {data_.data() + i * arity_, arity_}; }

  /// Sorts rows lexicographically and removes duplicates.
  void sort_and_dedup();

 private:
  std::string name_;
  std::size_t arity_;
  std::vector<Value> data_;
};

/// Relations by name.
class Database {
 public:
  void add(Relation relation);
  const Relation* find(const std::string& name) const;
  const Relation& at(const std::string& name) const;
  const std::map<std::string, Relation>& relations() const noexcept { return relations_; }

 private:
  std::map<std::string, Relation> relations_;
};

}  // namespace cltj
