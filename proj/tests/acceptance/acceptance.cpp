// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cltj/clftj.hpp"
#include "cltj/dataset.hpp"
#include "cltj/decompose.hpp"
#include "cltj/lftj.hpp"
#include "cltj/random.hpp"
#include "cltj/separators.hpp"
#include "cltj/stats.hpp"
#include "cltj/workload.hpp"
#include "cltj/ytd.hpp"
#include "oracles.hpp"

using namespace cltj;

namespace {

/// Collects failure messages for one criterion; keeps the first few.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_ < 5) notes_ << (failures_ ? "; " : "") << what;
    ++failures_;
  }
  void note(const std::string& info) { info_ << (info_.tellp() > 0 ? "; " : "") << info; }
  bool ok() const { return failures_ == 0; }
  std::string failures() const {
    return notes_.str() + (failures_ > 5 ? " (+" + std::to_string(failures_ - 5) + " more)" : "");
  }
  std::string info() const { return info_.str(); }

 private:
  std::size_t failures_ = 0;
  std::ostringstream notes_;
  std::ostringstream info_;
};

struct Engines {
  std::uint64_t lftj;
  ClftjCountResult clftj;
  EngineStats lftj_stats;
};

Engines run_both(const Query& q, const OrderedTD& td, const Database& db, const CacheConfig& config = {}) {
  ClftjPlan plan(q, td, derive_ordering(td, degree_rank(q)).order);
  TrieCatalog catalog = TrieCatalog::build(db, plan.join_plan());
  CountResult plain = tj_count(plan.join_plan(), catalog);
  return {plain.count, cached_tj_count(plan, catalog, config), plain.stats};
}

const Dataset& zipf_dataset() {
  static const Dataset ds = gen_zipf_graph(500, 3000, 1.2, 1);
  return ds;
}

OrderedTD best_td(const Query& q, const Database& db) {
  StatsCatalog stats = compute_stats(db);
  return rank_tds(enumerate_tds(q), q, &stats).front();
}

// "n-path" counts nodes: a 5-path has four atoms.
Query path_nodes(std::size_t n) { return gen_path_query(n - 1); }

std::string sep_string(NodeSet s) {
  std::string out = "{";
  for (NodeId v : members(s)) out += (out.size() > 1 ? "," : "") + std::to_string(v);
  return out + "}";
}

void golden_example(Check& c) {
  Query q = testing::example_query();
  OrderedTD td = testing::example_td(q);
  Database db = testing::example_db();
  ClftjPlan plan(q, td, derive_ordering(td, degree_rank(q)).order);
  TrieCatalog catalog = TrieCatalog::build(db, plan.join_plan());
  std::optional<std::uint64_t> entry;
  ClftjHooks hooks;
  hooks.on_insert = [&](std::size_t node, std::span<const Value> key, std::uint64_t value) {
    if (td.adhesion(node) == std::vector<VarId>{*q.find_var("x2")} && key.size() == 1 && key[0] == 1) entry = value;
  };
  const std::uint64_t lftj = tj_count(plan.join_plan(), catalog).count;
  const std::uint64_t clftj = cached_tj_count(plan, catalog, {}, {}, hooks).count;
  const std::uint64_t ytd = ytd_count(q, td, db).count;
  c.expect(lftj == 64, "tj_count " + std::to_string(lftj));
  c.expect(clftj == 64, "cached_tj_count " + std::to_string(clftj));
  c.expect(ytd == 64, "ytd_count " + std::to_string(ytd));
  c.expect(entry.has_value(), "no cache entry for x2=1");
  c.expect(entry && *entry == 16, "cache entry for x2=1 holds " + (entry ? std::to_string(*entry) : "nothing"));
}

void oracle_equivalence(Check& c) {
  std::size_t tds_checked = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t nrel = 1 + seed % 3;
    Query q = testing::random_pattern_query(1000 + seed, nrel);
    Database db = testing::random_db(2000 + seed, nrel, 30, 3 + static_cast<Value>(seed % 4));
    const std::uint64_t expected = testing::nested_loop_count(q, db);
    DecomposeLimits limits;
    limits.max_tds = 8;
    for (const OrderedTD& td : enumerate_tds(q, limits)) {
      ++tds_checked;
      Engines e = run_both(q, td, db);
      const std::uint64_t ytd = ytd_count(q, td, db).count;
      const std::string where = "seed " + std::to_string(seed) + " " + q.to_string();
      c.expect(e.lftj == expected, where + ": lftj " + std::to_string(e.lftj) + " != " + std::to_string(expected));
      c.expect(e.clftj.count == expected, where + ": clftj " + std::to_string(e.clftj.count));
      c.expect(ytd == expected, where + ": ytd " + std::to_string(ytd));
    }
  }
  c.note(std::to_string(tds_checked) + " (instance, TD) pairs");
}

void separator_enumeration(Check& c) {
  std::size_t sets = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 6;
    Graph g = testing::random_connected_graph(seed, n, 0.3);
    for (NodeSet constraint : {NodeSet{0}, node_bit(static_cast<NodeId>(SplitMix64(seed).next() % n))}) {
      std::vector<NodeSet> got = enumerate_constrained_separators(g, constraint);
      std::vector<NodeSet> want = testing::brute_separators(g, constraint);
      sets += got.size();
      const std::string where = "graph " + std::to_string(seed) + " C=" + sep_string(constraint);
      c.expect(got == want, where + ": " + std::to_string(got.size()) + " sets vs " + std::to_string(want.size()));
      for (std::size_t i = 1; i < got.size(); ++i) {
        c.expect(set_size(got[i - 1]) <= set_size(got[i]), where + ": size decreases at " + std::to_string(i));
      }
      c.expect(std::set<NodeSet>(got.begin(), got.end()).size() == got.size(), where + ": repeated set");
    }
  }
  c.note(std::to_string(sets) + " separating sets");
}

void constrained_minimum(Check& c) {
  SplitMix64 rng(77);
  std::size_t feasible = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.next() % 6;
    SeparatorProblem p;
    p.g = testing::random_connected_graph(rng.next(), n, rng.next_unit() * 0.6);
    for (NodeId v = 0; v < n; ++v) {
      const double r = rng.next_unit();
      if (r < 0.25) p.constraint |= node_bit(v);
      const double m = rng.next_unit();
      if (m < 0.12) {
        p.include |= node_bit(v);
      } else if (m < 0.24) {
        p.exclude |= node_bit(v);
      }
    }
    auto got = min_constrained_separator(p);
    auto want = testing::brute_min_separator(p);
    const std::string where = "trial " + std::to_string(trial);
    c.expect(got.has_value() == want.has_value(), where + ": feasibility differs");
    if (!got || !want) continue;
    ++feasible;
    const NodeSet s = got->separator;
    c.expect(set_size(s) == *want, where + ": size " + std::to_string(set_size(s)) + " vs " + std::to_string(*want));
    c.expect((s & p.include) == p.include, where + ": misses an included node");
    c.expect((s & p.exclude) == 0, where + ": contains an excluded node");
    c.expect(is_constrained_separator(p.g, s, p.constraint), where + ": not a constrained separator");
    c.expect((p.constraint & ~(s | got->component_union)) == 0, where + ": C outside S and U");
  }
  c.note(std::to_string(feasible) + " feasible problems");
}

void td_validity(Check& c) {
  std::vector<Query> family;
  for (std::size_t n = 3; n <= 7; ++n) family.push_back(path_nodes(n));
  for (std::size_t k = 3; k <= 6; ++k) family.push_back(gen_cycle_query(k));
  for (std::uint64_t seed = 1; seed <= 6; ++seed) family.push_back(gen_random_graph_query(5, 0.4, seed));
  std::size_t total = 0;
  for (const Query& q : family) {
    auto tds = enumerate_tds(q);
    c.expect(!tds.empty(), q.to_string() + ": no TD");
    for (const OrderedTD& td : tds) {
      ++total;
      auto violation = validate_td(q, td);
      c.expect(!violation, q.to_string() + ": " + (violation ? violation->message : ""));
      c.expect(td.max_adhesion() <= 2, q.to_string() + ": adhesion " + std::to_string(td.max_adhesion()));
      c.expect(is_strongly_compatible(td, derive_ordering(td, degree_rank(q)).order),
               q.to_string() + ": derived ordering not strongly compatible");
    }
  }
  c.note(std::to_string(total) + " TDs over " + std::to_string(family.size()) + " queries");
}

void cache_invariance(Check& c) {
  const Database& db = zipf_dataset().db;
  for (const Query& q : {path_nodes(5), gen_cycle_query(5)}) {
    OrderedTD td = best_td(q, db);
    ClftjPlan plan(q, td, derive_ordering(td, degree_rank(q)).order);
    TrieCatalog catalog = TrieCatalog::build(db, plan.join_plan());
    std::optional<std::uint64_t> reference;
    for (std::optional<std::size_t> cap : {std::optional<std::size_t>(0), std::optional<std::size_t>(10),
                                           std::optional<std::size_t>(100), std::optional<std::size_t>(1000),
                                           std::optional<std::size_t>()}) {
      for (CachePolicy policy : {CachePolicy::kRejectWhenFull, CachePolicy::kLru}) {
        for (std::uint64_t tau : {1u, 3u}) {
          CacheConfig config{cap, policy, tau, false};
          auto r = cached_tj_count(plan, catalog, config);
          if (!reference) reference = r.count;
          const std::string where = q.to_string() + " cap " + (cap ? std::to_string(*cap) : "unlimited") + " " +
                                    std::string(to_string(policy)) + " tau " + std::to_string(tau);
          c.expect(r.count == *reference, where + ": count " + std::to_string(r.count));
          c.expect(!cap || r.stats.cache.peak_entries <= *cap,
                   where + ": peak " + std::to_string(r.stats.cache.peak_entries));
        }
      }
    }
    c.note(q.to_string() + " = " + std::to_string(reference.value_or(0)));
  }
}

void work_savings(Check& c) {
  const Database& db = zipf_dataset().db;
  for (const Query& q : {path_nodes(5), gen_cycle_query(5)}) {
    OrderedTD td = best_td(q, db);
    ClftjPlan plan(q, td, derive_ordering(td, degree_rank(q)).order);
    TrieCatalog catalog = TrieCatalog::build(db, plan.join_plan());
    CountResult plain = tj_count(plan.join_plan(), catalog);
    ClftjCountResult cached = cached_tj_count(plan, catalog, {});
    c.expect(plain.count == cached.count, q.to_string() + ": counts differ");
    c.expect(cached.stats.engine.recursive_calls < plain.stats.recursive_calls,
             q.to_string() + ": recursive_calls " + std::to_string(cached.stats.engine.recursive_calls) +
                 " vs " + std::to_string(plain.stats.recursive_calls));
    c.expect(cached.stats.cache.hits > 0, q.to_string() + ": no cache hits");
    char ratio[64];
    std::snprintf(ratio, sizeof ratio, "%.1fx wall, %.1fx calls",
                  plain.stats.wall_time_ms / std::max(cached.stats.engine.wall_time_ms, 1e-3),
                  static_cast<double>(plain.stats.recursive_calls) /
                      static_cast<double>(std::max<std::uint64_t>(cached.stats.engine.recursive_calls, 1)));
    c.note(q.to_string() + " " + ratio);
  }
}

void bounded_monotonicity(Check& c) {
  const Database& db = zipf_dataset().db;
  Query q = gen_cycle_query(5);
  OrderedTD td = best_td(q, db);
  ClftjPlan plan(q, td, derive_ordering(td, degree_rank(q)).order);
  TrieCatalog catalog = TrieCatalog::build(db, plan.join_plan());
  std::optional<std::uint64_t> previous;
  std::string calls;
  for (std::optional<std::size_t> cap : {std::optional<std::size_t>(0), std::optional<std::size_t>(10),
                                         std::optional<std::size_t>(100), std::optional<std::size_t>(1000),
                                         std::optional<std::size_t>()}) {
    CacheConfig config;
    config.capacity = cap;
    const std::uint64_t now = cached_tj_count(plan, catalog, config).stats.engine.recursive_calls;
    calls += (calls.empty() ? "" : " ") + std::to_string(now);
    c.expect(!previous || now <= *previous, "calls rise to " + std::to_string(now) + " at capacity " +
                                                (cap ? std::to_string(*cap) : "unlimited"));
    previous = now;
  }
  c.note("recursive_calls " + calls);
}

void factorized_eval(Check& c) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t nrel = 1 + seed % 2;
    Query q = testing::random_pattern_query(5000 + seed, nrel);
    Database db = testing::random_db(6000 + seed, nrel, 30, 4);
    OrderedTD td = enumerate_tds(q).front();
    ClftjPlan plan(q, td, derive_ordering(td, degree_rank(q)).order);
    TrieCatalog catalog = TrieCatalog::build(db, plan.join_plan());
    auto fr = cached_tj_eval(plan, catalog, {});
    std::set<std::vector<Value>> got;
    std::size_t emitted = 0;
    fr_enumerate(fr.result, [&](std::span<const Value> t) {
      ++emitted;
      got.emplace(t.begin(), t.end());
    });
    auto flat = tj_eval_all(plan.join_plan(), catalog);
    const std::string where = "seed " + std::to_string(seed) + " " + q.to_string();
    c.expect(fr_count(fr.result) == tj_count(plan.join_plan(), catalog).count, where + ": fr_count differs");
    c.expect(got == std::set<std::vector<Value>>(flat.begin(), flat.end()), where + ": tuple sets differ");
    c.expect(emitted == flat.size(), where + ": enumeration repeats tuples");
  }
}

void clique_behavior(Check& c) {
  Query q = gen_cycle_query(3);
  auto tds = enumerate_tds(q);
  c.expect(tds.size() == 1, std::to_string(tds.size()) + " TDs");
  c.expect(!tds.empty() && tds.front().size() == 1, "TD is not a single bag");
  if (tds.empty()) return;
  Engines e = run_both(q, tds.front(), zipf_dataset().db);
  c.expect(e.lftj == e.clftj.count, "counts differ");
  c.expect(e.clftj.stats.engine.recursive_calls == e.lftj_stats.recursive_calls, "recursive_calls differ");
  c.expect(e.clftj.stats.engine.matches_enumerated == e.lftj_stats.matches_enumerated, "matches differ");
  c.expect(e.clftj.stats.engine.access == e.lftj_stats.access, "trie accesses differ");
  c.expect(e.clftj.stats.cache == CacheCounters{}, "cache activity on a single bag");
  c.note("triangles " + std::to_string(e.lftj));
}

struct Criterion {
  int id;
  const char* name;
  double limit_secs;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "worked example golden counts and cache entry", 1, golden_example},
      {2, "oracle equivalence on 50 random instances", 60, oracle_equivalence},
      {3, "separator enumeration matches exhaustive search", 30, separator_enumeration},
      {4, "constrained minimum separators", 30, constrained_minimum},
      {5, "TD validity over the query family", 10, td_validity},
      {6, "cache-invariance sweep", 120, cache_invariance},
      {7, "work savings over LFTJ", 120, work_savings},
      {8, "bounded-cache monotonicity", 120, bounded_monotonicity},
      {9, "factorized evaluation", 30, factorized_eval},
      {10, "clique behavior", 1, clique_behavior},
  };
  zipf_dataset();
  int failed = 0;
  for (const Criterion& cr : criteria) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char timing[96];
    std::snprintf(timing, sizeof timing, "%.3f s (limit %.0f s)", secs, cr.limit_secs);
    check.expect(secs < cr.limit_secs, std::string("too slow: ") + timing);
    const bool ok = check.ok();
    failed += ok ? 0 : 1;
    std::printf("%s criterion %d: %s [%s]", ok ? "PASS" : "FAIL", cr.id, cr.name, timing);
    if (!check.info().empty()) std::printf(" %s", check.info().c_str());
    if (!ok) std::printf(" -- %s", check.failures().c_str());
    std::printf("\n");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
