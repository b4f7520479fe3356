#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cltj/engine.hpp"
#include "cltj/join_plan.hpp"

namespace cltj {

struct CountResult {
  std::uint64_t count = 0;
  EngineStats stats;
};

/// Receives one result tuple, one value per variable in plan-ordering order.
using TupleSink = std::function<void(std::span<const Value>)>;

/// Vanilla trie join, counting |q(D)| under set semantics.
CountResult tj_count(const JoinPlan& plan, const TrieCatalog& catalog, const ExecutionLimits& limits = {});

/// Vanilla trie join, streaming each result once in lexicographic order of
/// the plan's ordering. Nothing is materialized.
EngineStats tj_eval(const JoinPlan& plan, const TrieCatalog& catalog, const TupleSink& sink,
                    const ExecutionLimits& limits = {});

/// Collects tj_eval's stream.
std::vector<std::vector<Value>> tj_eval_all(const JoinPlan& plan, const TrieCatalog& catalog);

}  // namespace cltj
