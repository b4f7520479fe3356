#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cltj/relation.hpp"

namespace cltj {

struct ColumnStats {
  std::uint64_t distinct = 0;
  /// Most frequent values, by descending frequency then ascending value.
  std::vector<std::pair<Value, std::uint64_t>> top;
  /// rows / distinct; 1 for an empty column.
  double duplication = 1.0;
};

struct RelationStats {
  std::uint64_t rows = 0;
  std::vector<ColumnStats> columns;
};

using StatsCatalog = std::map<std::string, RelationStats>;

inline constexpr std::size_t kTopFrequencies = 16;

RelationStats compute_relation_stats(const Relation& relation, std::size_t top_k = kTopFrequencies);
StatsCatalog compute_stats(const Database& db);

}  // namespace cltj
