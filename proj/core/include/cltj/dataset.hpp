#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cltj/relation.hpp"

namespace cltj {

/// Bijection between external node ids and dense internal ids [0, size()).
/// Internal ids follow ascending external id.
class Dictionary {
 public:
  Dictionary() = default;
  /// `external` may be unsorted and contain duplicates.
  explicit Dictionary(std::vector<std::int64_t> external);

  std::size_t size() const noexcept { return external_.size(); }
  std::optional<Value> encode(std::int64_t external) const;
  /// Throws DataError for an id outside [0, size()).
  std::int64_t decode(Value internal) const;

 private:
  std::vector<std::int64_t> external_;
};

struct EdgeListOptions {
  bool directed = true;
  bool dedup = true;
  bool drop_self_loops = false;
};

/// Relations plus the dictionary that produced their values.
struct Dataset {
  Database db;
  Dictionary dictionary;
  std::string source;
  bool directed = true;
  std::size_t input_rows = 0;
};

/// Name of the edge relation produced by the loaders.
inline constexpr std::string_view kEdgeRelation = "E";

/// SNAP layout: two whitespace-separated integers per line; `#` starts a
/// comment line; blank lines are skipped. Throws DataError with a line number.
Dataset parse_edge_list(std::istream& in, const EdgeListOptions& opts, std::string source = "<stream>");
Dataset load_edge_list(const std::string& path, const EdgeListOptions& opts = {});

/// Directed graph on nodes 0..nodes-1 whose endpoints are drawn independently
/// with P(i) proportional to 1/(i+1)^skew. No self-loops or duplicate edges.
/// Throws Error if edges > nodes*(nodes-1).
Dataset gen_zipf_graph(std::size_t nodes, std::size_t edges, double skew, std::uint64_t seed);

/// Writes relation E with external ids, one edge per line.
void write_edge_list(std::ostream& out, const Dataset& ds);

}  // namespace cltj
