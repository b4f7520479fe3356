#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "cltj/graph.hpp"
#include "cltj/query.hpp"
#include "cltj/separators.hpp"
#include "cltj/stats.hpp"
#include "cltj/td.hpp"

namespace cltj {

/// Picks a C-constrained separator of g, or nullopt to stop decomposing.
using SeparatorChooser = std::function<std::optional<SeparatorResult>(const Graph& g, NodeSet constraint)>;

/// Recursive decomposition of g; graph nodes become TD variables. On a
/// separator (S, U) the subtree for g[S ∪ U] under constraint C ∪ S is the
/// top, and each remaining component V gets a child subtree for g[S ∪ V]
/// under constraint S. The root bag contains C. Throws ContractViolation if
/// the chooser returns something that is not a constrained separator.
OrderedTD recursive_td(const Graph& g, NodeSet constraint, const SeparatorChooser& chooser);

/// First separator of size ≤ max_adhesion by rank; stops below 3 nodes.
SeparatorChooser default_chooser(std::size_t max_adhesion = 2);

/// Decomposes the Gaifman graph with the default chooser and removes
/// redundant bags. Disconnected components hang off an empty root bag.
OrderedTD generic_decompose(const Query& q, std::size_t max_adhesion = 2);

struct DecomposeLimits {
  std::size_t max_adhesion = 2;
  std::size_t max_tds = 64;
  std::size_t max_seps_per_level = 8;
};

/// Every TD reachable by choosing, at each recursion site, one of the first
/// max_seps_per_level separators of size ≤ max_adhesion. Depth-first over
/// choices, redundancy removed, duplicates dropped, at most max_tds results.
std::vector<OrderedTD> enumerate_tds(const Query& q, const DecomposeLimits& limits = {});

/// Heuristic TD quality. Preferred: any multi-bag TD over a single bag, then
/// smaller max adhesion, more bags, smaller depth, and (with statistics)
/// higher adhesion skew.
struct TDScore {
  std::size_t max_adhesion = 0;
  std::size_t bags = 0;
  std::size_t depth = 0;
  /// Mean duplication factor over adhesion-variable columns.
  std::optional<double> skew;
};

/// True if `a` is strictly preferred to `b`.
bool preferred(const TDScore& a, const TDScore& b);

TDScore score_td(const OrderedTD& td, const Query& q, const StatsCatalog* stats = nullptr);

/// Stable sort, best first.
std::vector<OrderedTD> rank_tds(std::vector<OrderedTD> tds, const Query& q, const StatsCatalog* stats = nullptr);

}  // namespace cltj
