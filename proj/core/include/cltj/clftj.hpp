#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cltj/cache.hpp"
#include "cltj/engine.hpp"
#include "cltj/factorized.hpp"
#include "cltj/join_plan.hpp"
#include "cltj/td.hpp"

namespace cltj {

struct ClftjStats {
  EngineStats engine;
  CacheCounters cache;
};

/// A JoinPlan together with a TD it is strongly compatible with.
///
/// Nodes that own no variable (bags contained in their parent, or an empty
/// root) are contracted first; this leaves owners, the preorder of the
/// remaining nodes, and every adhesion unchanged.
class ClftjPlan {
 public:
  /// Throws PlanError if the TD is invalid for the query or the ordering is
  /// not strongly compatible with it.
  ClftjPlan(const Query& q, const OrderedTD& td, std::vector<VarId> ordering);

  const JoinPlan& join_plan() const noexcept { return join_; }
  const OrderedTD& td() const noexcept { return td_; }
  const OwnedBlocks& blocks() const noexcept { return blocks_; }
  /// Ordering positions of adhesion(node), ascending.
  std::span<const std::size_t> adhesion_positions(std::size_t node) const { return adhesion_positions_.at(node); }

 private:
  JoinPlan join_;
  OrderedTD td_;
  OwnedBlocks blocks_;
  std::vector<std::vector<std::size_t>> adhesion_positions_;
};

/// Drops TD nodes owning no variable (see ClftjPlan).
OrderedTD contract_unowned_nodes(const OrderedTD& td);

/// Observation points used by tests and diagnostics.
struct ClftjHooks {
  /// A count was stored for (node, adhesion key).
  std::function<void(std::size_t node, std::span<const Value> key, std::uint64_t value)> on_insert;
  /// A node's last owned variable matched and the product of its children's
  /// intermediate counts was added.
  std::function<void(std::size_t node, std::uint64_t product)> on_accumulate;
};

struct ClftjCountResult {
  std::uint64_t count = 0;
  ClftjStats stats;
};

/// Cached trie join, counting |q(D)|. Equals tj_count for every cache config.
ClftjCountResult cached_tj_count(const ClftjPlan& plan, const TrieCatalog& catalog, const CacheConfig& config,
                                 const ExecutionLimits& limits = {}, const ClftjHooks& hooks = {});

struct ClftjEvalResult {
  FactorizedResult result;
  ClftjStats stats;
};

/// Cached trie join producing a factorized result; cached fragments are
/// shared rather than rebuilt.
ClftjEvalResult cached_tj_eval(const ClftjPlan& plan, const TrieCatalog& catalog, const CacheConfig& config,
                               const ExecutionLimits& limits = {});

}  // namespace cltj
