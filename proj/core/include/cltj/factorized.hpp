#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "cltj/query.hpp"

namespace cltj {

struct FrNode;
using FrRef = std::shared_ptr<const FrNode>;

/// Node of a factorized result. A union binds one ordering position to each
/// of its (ascending) branch values; a product concatenates the tuples of its
/// factors, which cover disjoint later positions; a unit is the empty tuple.
/// Subtrees may be shared.
struct FrNode {
  enum class Kind { kUnit, kUnion, kProduct };

  Kind kind = Kind::kUnit;
  std::size_t position = 0;
  std::vector<std::pair<Value, FrRef>> branches;
  std::vector<FrRef> factors;

  static FrRef unit();
};

/// A join result as a union/product DAG over `arity` ordering positions.
struct FactorizedResult {
  FrRef root;
  std::size_t arity = 0;
};

/// Sum-of-products count, without expansion. Throws CountOverflow.
std::uint64_t fr_count(const FactorizedResult& fr);

/// Streams every expanded tuple once, lexicographically in ordering order.
void fr_enumerate(const FactorizedResult& fr, const std::function<void(std::span<const Value>)>& sink);

struct FrShape {
  std::size_t distinct_nodes = 0;   // nodes counted once
  std::size_t referenced_nodes = 0;  // nodes counted once per reference path
};
FrShape fr_shape(const FactorizedResult& fr);

}  // namespace cltj
