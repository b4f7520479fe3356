#include <gtest/gtest.h>

#include <algorithm>

#include "cltj/clftj.hpp"
#include "cltj/decompose.hpp"
#include "cltj/error.hpp"
#include "cltj/lftj.hpp"
#include "cltj/workload.hpp"
#include "cltj/ytd.hpp"
#include "oracles.hpp"

namespace cltj {
namespace {

Database as_edges(const Database& db) {
  Relation e("E", 2);
  const Relation& r0 = db.at("R0");
  for (std::size_t i = 0; i < r0.size(); ++i) e.add(r0.tuple(i));
  Database out = db;
  out.add(e);
  return out;
}

testing::TupleSet as_set(const std::vector<std::vector<Value>>& rows) { return {rows.begin(), rows.end()}; }

TEST(YtdCount, RunningExample) {
  Query q = testing::example_query();
  auto r = ytd_count(q, testing::example_td(q), testing::example_db());
  EXPECT_EQ(r.count, 64u);
  EXPECT_EQ(r.stats.bag_sizes.size(), 3u);
  EXPECT_FALSE(r.stats.pairwise);
  EXPECT_EQ(r.stats.peak_intermediate_tuples, 4u + 8 + 8 + 8);
}

TEST(YtdCount, TwoBagsSkipReduction) {
  Query q = gen_path_query(2);
  OrderedTD td({{0, 1}, {1, 2}}, {std::nullopt, 0});
  Database db = as_edges(testing::random_db(1, 1, 30, 5));
  auto r = ytd_count(q, td, db);
  EXPECT_TRUE(r.stats.pairwise);
  EXPECT_EQ(r.stats.bag_sizes.size(), 1u);
  EXPECT_EQ(r.count, testing::nested_loop_count(q, db));
}

TEST(YtdCount, SemijoinsNeverGrowBags) {
  Query q = gen_path_query(5);
  Database db = as_edges(testing::random_db(8, 1, 30, 8));
  OrderedTD td = generic_decompose(q);
  auto r = ytd_count(q, td, db);
  ASSERT_EQ(r.stats.bag_sizes.size(), 3u);
  for (std::size_t pass = 1; pass < 3; ++pass) {
    for (std::size_t k = 0; k < td.size(); ++k) {
      EXPECT_LE(r.stats.bag_sizes[pass][k], r.stats.bag_sizes[pass - 1][k]);
    }
  }
  EXPECT_EQ(r.count, testing::nested_loop_count(q, db));
}

TEST(YtdCount, ThreeWayAgreement) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Query q = testing::random_pattern_query(seed + 300, 2);
    Database db = testing::random_db(seed + 11, 2, 30, 4);
    const std::uint64_t expected = testing::nested_loop_count(q, db);
    for (const OrderedTD& td : enumerate_tds(q, {2, 4, 4})) {
      ASSERT_EQ(ytd_count(q, td, db).count, expected) << q.to_string() << "\n" << serialize_td(td, q);
      ClftjPlan plan(q, td, derive_ordering(td, degree_rank(q)).order);
      TrieCatalog catalog = TrieCatalog::build(db, plan.join_plan());
      EXPECT_EQ(cached_tj_count(plan, catalog, {}).count, expected);
      EXPECT_EQ(tj_count(plan.join_plan(), catalog).count, expected);
    }
  }
}

TEST(YtdCount, FiveCycle) {
  Query q = gen_cycle_query(5);
  Database db = as_edges(testing::random_db(21, 1, 30, 5));
  EXPECT_EQ(ytd_count(q, generic_decompose(q), db).count, testing::nested_loop_count(q, db));
}

TEST(YtdCount, ImpliedConstraintForUncoveredBagVariable) {
  // bag {a,b,c} holds only E(a,b); c is constrained through E(b,c)'s bag
  Query q = parse_query("E(a,b), F(b,c), G(c,d)");
  OrderedTD td({{1, 2}, {0, 1, 2}, {2, 3}}, {std::nullopt, 0, 0});
  Database db = testing::random_db(4, 1, 30, 4);
  for (const char* name : {"E", "F", "G"}) {
    Relation r(name, 2);
    const Relation& src = db.at("R0");
    for (std::size_t i = 0; i < src.size(); ++i) r.add({src.tuple(i)[0], (src.tuple(i)[1] + name[0]) % 4});
    db.add(r);
  }
  EXPECT_EQ(ytd_count(q, td, db).count, testing::nested_loop_count(q, db));
  OrderedTD projected({{0, 1, 3}, {1, 2}, {2, 3}}, {std::nullopt, 0, 1});
  Query q2 = parse_query("E(a,b), F(b,c), G(c,d), H(a,d)");
  Relation h("H", 2);
  for (Value i = 0; i < 4; ++i) h.add({i, (i + 1) % 4});
  db.add(h);
  // bag {a,b,d} needs d constrained through a projection of G
  OrderedTD td2({{0, 1, 3}, {1, 2, 3}}, {std::nullopt, 0});
  EXPECT_EQ(ytd_count(q2, td2, db).count, testing::nested_loop_count(q2, db));
  EXPECT_EQ(as_set(ytd_eval_all(q2, td2, db)), testing::nested_loop_eval(q2, db));
}

TEST(YtdEval, SingleAtom) {
  Query q = parse_query("E(a,b)");
  Relation e("E", 2);
  e.add({3, 4});
  e.add({1, 2});
  Database db;
  db.add(e);
  EXPECT_EQ(ytd_eval_all(q, OrderedTD::singleton({0, 1}), db), (std::vector<std::vector<Value>>{{1, 2}, {3, 4}}));
}

TEST(YtdEval, FourPathAgreesWithTjEval) {
  Query q = gen_path_query(4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Database db = as_edges(testing::random_db(seed, 1, 30, 5));
    JoinPlan plan(q, identity_ordering(q));
    TrieCatalog catalog = TrieCatalog::build(db, plan);
    for (const OrderedTD& td : enumerate_tds(q, {2, 4, 4})) {
      auto rows = ytd_eval_all(q, td, db);
      EXPECT_EQ(as_set(rows), as_set(tj_eval_all(plan, catalog)));
      EXPECT_EQ(rows.size(), as_set(rows).size());
    }
  }
}

TEST(YtdEval, EmptyDatabase) {
  Query q = gen_path_query(3);
  Database db;
  db.add(Relation("E", 2));
  EXPECT_TRUE(ytd_eval_all(q, generic_decompose(q), db).empty());
  EXPECT_EQ(ytd_count(q, generic_decompose(q), db).count, 0u);
}

TEST(Ytd, RejectsInvalidTd) {
  Query tri = gen_cycle_query(3);
  EXPECT_THROW(ytd_count(tri, OrderedTD({{0, 1}, {1, 2}}, {std::nullopt, 0}), testing::example_db()), PlanError);
}

}  // namespace
}  // namespace cltj
