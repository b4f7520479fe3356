#include "cltj/lftj.hpp"

#include <chrono>

namespace cltj {

namespace {

class TrieJoin {
 public:
  TrieJoin(const JoinPlan& plan, const TrieCatalog& catalog, const TupleSink* sink,
           const ExecutionLimits& limits)
      : cursor_(plan, catalog, &stats_.access), n_(plan.num_vars()), sink_(sink), guard_(limits) {}

  CountResult run() {
    auto start = std::chrono::steady_clock::now();
    if (cursor_.bind_constants()) join(0);
    stats_.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return {total_, stats_};
  }

 private:
  void join(std::size_t d) {
    ++stats_.recursive_calls;
    if (guard_.expired()) throw TimedOut(stats_, total_);
    if (d == n_) {
      total_ = checked_add(total_, 1);
      if (sink_) (*sink_)(cursor_.values());
      return;
    }
    for (bool ok = cursor_.first(d); ok; ok = cursor_.next(d)) {
      ++stats_.matches_enumerated;
      join(d + 1);
    }
    cursor_.close(d);
  }

  EngineStats stats_;
  JoinCursor cursor_;
  std::size_t n_;
  const TupleSink* sink_;
  DeadlineGuard guard_;
  std::uint64_t total_ = 0;
};

}  // namespace

CountResult tj_count(const JoinPlan& plan, const TrieCatalog& catalog, const ExecutionLimits& limits) {
  return TrieJoin(plan, catalog, nullptr, limits).run();
}

EngineStats tj_eval(const JoinPlan& plan, const TrieCatalog& catalog, const TupleSink& sink,
                    const ExecutionLimits& limits) {
  return TrieJoin(plan, catalog, &sink, limits).run().stats;
}

std::vector<std::vector<Value>> tj_eval_all(const JoinPlan& plan, const TrieCatalog& catalog) {
  std::vector<std::vector<Value>> out;
  tj_eval(plan, catalog, [&](std::span<const Value> t) { out.emplace_back(t.begin(), t.end()); });
  return out;
}

}  // namespace cltj
