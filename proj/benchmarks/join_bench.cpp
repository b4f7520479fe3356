#include <benchmark/benchmark.h>

#include "cltj/clftj.hpp"
#include "cltj/dataset.hpp"
#include "cltj/decompose.hpp"
#include "cltj/lftj.hpp"
#include "cltj/stats.hpp"
#include "cltj/workload.hpp"
#include "cltj/ytd.hpp"

namespace {

using namespace cltj;

const Dataset& dataset() {
  static const Dataset ds = gen_zipf_graph(300, 1500, 1.2, 1);
  return ds;
}

// range(0): 0 = path, 1 = cycle; range(1): atoms
struct Setup {
  Query q;
  OrderedTD td;
  ClftjPlan plan;
  TrieCatalog catalog;

  static Query make_query(const benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(1));
    return state.range(0) == 0 ? gen_path_query(k) : gen_cycle_query(k);
  }

  static OrderedTD make_td(const Query& q) {
    StatsCatalog stats = compute_stats(dataset().db);
    return rank_tds(enumerate_tds(q), q, &stats).front();
  }

  explicit Setup(const benchmark::State& state)
      : q(make_query(state)),
        td(make_td(q)),
        plan(q, td, derive_ordering(td, degree_rank(q)).order),
        catalog(TrieCatalog::build(dataset().db, plan.join_plan())) {}
};

void label(benchmark::State& state, std::uint64_t count, std::uint64_t calls) {
  state.SetLabel(state.range(0) == 0 ? "path" : "cycle");
  state.counters["count"] = static_cast<double>(count);
  state.counters["recursive_calls"] = static_cast<double>(calls);
}

void BM_Lftj(benchmark::State& state) {
  Setup s(state);
  CountResult r;
  for (auto _ : state) {
    r = tj_count(s.plan.join_plan(), s.catalog);
    benchmark::DoNotOptimize(r.count);
  }
  label(state, r.count, r.stats.recursive_calls);
}

void BM_Clftj(benchmark::State& state) {
  Setup s(state);
  ClftjCountResult r;
  for (auto _ : state) {
    r = cached_tj_count(s.plan, s.catalog, {});
    benchmark::DoNotOptimize(r.count);
  }
  label(state, r.count, r.stats.engine.recursive_calls);
  state.counters["cache_hits"] = static_cast<double>(r.stats.cache.hits);
}

void BM_ClftjBounded(benchmark::State& state) {
  Setup s(state);
  CacheConfig config;
  config.capacity = static_cast<std::size_t>(state.range(2));
  config.policy = CachePolicy::kLru;
  ClftjCountResult r;
  for (auto _ : state) {
    r = cached_tj_count(s.plan, s.catalog, config);
    benchmark::DoNotOptimize(r.count);
  }
  label(state, r.count, r.stats.engine.recursive_calls);
}

void BM_Ytd(benchmark::State& state) {
  Setup s(state);
  YtdCountResult r;
  for (auto _ : state) {
    r = ytd_count(s.q, s.td, dataset().db);
    benchmark::DoNotOptimize(r.count);
  }
  label(state, r.count, r.stats.engine.recursive_calls);
}

void Shapes(benchmark::internal::Benchmark* b) {
  for (int k = 2; k <= 4; ++k) b->Args({0, k});
  for (int k = 3; k <= 5; ++k) b->Args({1, k});
}

BENCHMARK(BM_Lftj)->Apply(Shapes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Clftj)->Apply(Shapes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Ytd)->Apply(Shapes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClftjBounded)->Args({1, 5, 0})->Args({1, 5, 100})->Args({1, 5, 10000})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
