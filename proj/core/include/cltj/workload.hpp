#pragma once

#include <cstdint>
#include <string>

#include "cltj/query.hpp"

namespace cltj {

/// Variable names used by the generators: a..z, then v26, v27, ...
std::string generated_var_name(std::size_t index);

/// k atoms E(v0,v1), ..., E(v{k-1},vk).
Query gen_path_query(std::size_t k);

/// E(v1,v2), ..., E(v{k-1},vk), E(v1,vk); requires k >= 3.
Query gen_cycle_query(std::size_t k);

/// Erdos-Renyi G(n, p) pattern over relation E, regenerated until connected.
///
/// Pair decisions are drawn from one SplitMix64 stream seeded with `seed`:
/// for each attempt, pairs (i, j) with i < j are visited in lexicographic
/// order and pair (i, j) is kept iff next_unit() < p. A disconnected attempt
/// is discarded and the next attempt continues the same stream. Kept pairs
/// become atoms E(v_i, v_j) in visiting order. Gives up after 10,000 attempts.
Query gen_random_graph_query(std::size_t n, double p, std::uint64_t seed);

}  // namespace cltj
