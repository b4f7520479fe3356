#include "cltj/stats.hpp"

#include <algorithm>
#include <unordered_map>

namespace cltj {

RelationStats compute_relation_stats(const Relation& relation, std::size_t top_k) {
  RelationStats out;
  out.rows = relation.size();
  out.columns.resize(relation.arity());
  for (std::size_t c = 0; c < relation.arity(); ++c) {
    std::unordered_map<Value, std::uint64_t> freq;
    for (std::size_t i = 0; i < relation.size(); ++i) ++freq[relation.tuple(i)[c]];
    std::vector<std::pair<Value, std::uint64_t>> all(freq.begin(), freq.end());
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    ColumnStats& col = out.columns[c];
    col.distinct = all.size();
    col.duplication = all.empty() ? 1.0 : static_cast<double>(out.rows) / static_cast<double>(all.size());
    if (all.size() > top_k) all.resize(top_k);
    col.top = std::move(all);
  }
  return out;
}

StatsCatalog compute_stats(const Database& db) {
  StatsCatalog out;
  for (const auto& [name, rel] : db.relations()) out.emplace(name, compute_relation_stats(rel));
  return out;
}

}  // namespace cltj
