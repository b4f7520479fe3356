#pragma once

#include <cstdint>
#include <vector>

#include "cltj/engine.hpp"
#include "cltj/lftj.hpp"
#include "cltj/relation.hpp"
#include "cltj/td.hpp"

namespace cltj {

struct YtdStats {
  /// Trie work of the per-bag joins, summed.
  EngineStats engine;
  /// Total materialized bag tuples right after the per-bag joins.
  std::uint64_t peak_intermediate_tuples = 0;
  /// Bag sizes after materialization, after the upward semijoin pass and after
  /// the downward pass (the last two are absent when the reduction is skipped).
  std::vector<std::vector<std::uint64_t>> bag_sizes;
  /// Two bags: joined directly without the semijoin passes.
  bool pairwise = false;
};

struct YtdCountResult {
  std::uint64_t count = 0;
  YtdStats stats;
};

/// Yannakakis over a TD: each bag is joined by the trie-join engine from the
/// atoms assigned to it (every atom goes to the preorder-first bag covering
/// it), semijoin-reduced, then combined. Bag variables not covered by their
/// assigned atoms are constrained by a covering atom or its projection.
/// Throws PlanError for a TD that is invalid for `q`.
YtdCountResult ytd_count(const Query& q, const OrderedTD& td, const Database& db, const ExecutionLimits& limits = {});

/// Streams q(D), each tuple once, values in variable-id order.
YtdStats ytd_eval(const Query& q, const OrderedTD& td, const Database& db, const TupleSink& sink,
                  const ExecutionLimits& limits = {});

std::vector<std::vector<Value>> ytd_eval_all(const Query& q, const OrderedTD& td, const Database& db);

}  // namespace cltj
