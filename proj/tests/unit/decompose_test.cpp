#include <gtest/gtest.h>

#include <set>

#include "cltj/decompose.hpp"
#include "cltj/error.hpp"
#include "cltj/workload.hpp"
#include "oracles.hpp"

namespace cltj {
namespace {

std::vector<VarId> all_vars(const Query& q) {
  std::vector<VarId> out(q.num_vars());
  for (VarId v = 0; v < out.size(); ++v) out[v] = v;
  return out;
}

TEST(RecursiveTd, RunningExampleFirstSeparator) {
  Query q = testing::example_query();
  Graph g = gaifman_graph(q);
  auto chooser = default_chooser(2);
  auto first = chooser(g, 0);
  ASSERT_TRUE(first);
  EXPECT_EQ(first->separator, make_set({*q.find_var("x2")}));
  EXPECT_EQ(first->component_union, make_set({*q.find_var("x1")}));
  OrderedTD td = remove_redundant_bags(recursive_td(g, 0, chooser));
  EXPECT_EQ(td.bag_set(0), (std::vector<VarId>{*q.find_var("x1"), *q.find_var("x2")}));
  EXPECT_FALSE(validate_td(q, td));
  EXPECT_GT(td.size(), 1u);
}

TEST(RecursiveTd, BottomChooserGivesSingleton) {
  Query q = gen_cycle_query(5);
  OrderedTD td = recursive_td(gaifman_graph(q), 0, [](const Graph&, NodeSet) { return std::nullopt; });
  EXPECT_EQ(td, OrderedTD::singleton(all_vars(q)));
}

TEST(RecursiveTd, FourCycleWithFixedSeparator) {
  Query q = gen_cycle_query(4);
  SeparatorChooser chooser = [](const Graph& g, NodeSet c) -> std::optional<SeparatorResult> {
    if (g.num_nodes() != 4) return std::nullopt;
    return make_separator_result(g, make_set({0, 2}), c);
  };
  OrderedTD td = remove_redundant_bags(recursive_td(gaifman_graph(q), 0, chooser));
  EXPECT_EQ(td, OrderedTD({{0, 1, 2}, {0, 2, 3}}, {std::nullopt, 0}));
  EXPECT_FALSE(validate_td(q, td));
}

TEST(RecursiveTd, RootContainsConstraint) {
  Query q = gen_path_query(6);
  Graph g = gaifman_graph(q);
  for (NodeId c = 0; c < g.num_nodes(); ++c) {
    OrderedTD td = recursive_td(g, node_bit(c), default_chooser(1));
    EXPECT_TRUE(td.contains(0, c));
    EXPECT_FALSE(validate_td(q, td));
  }
}

TEST(RecursiveTd, ChooserContractViolation) {
  Query q = gen_path_query(3);
  SeparatorChooser liar = [](const Graph&, NodeSet) -> std::optional<SeparatorResult> {
    return SeparatorResult{make_set({0}), make_set({1})};
  };
  EXPECT_THROW(recursive_td(gaifman_graph(q), 0, liar), ContractViolation);
}

TEST(GenericDecompose, Examples) {
  Query path = gen_path_query(5);
  OrderedTD p = generic_decompose(path);
  EXPECT_FALSE(validate_td(path, p));
  EXPECT_GT(p.size(), 1u);
  for (std::size_t k = 1; k < p.size(); ++k) EXPECT_EQ(p.adhesion(k).size(), 1u);

  Query tri = gen_cycle_query(3);
  EXPECT_EQ(generic_decompose(tri), OrderedTD::singleton(all_vars(tri)));

  Query c5 = gen_cycle_query(5);
  OrderedTD c = generic_decompose(c5);
  EXPECT_FALSE(validate_td(c5, c));
  EXPECT_EQ(c.max_adhesion(), 2u);
}

TEST(GenericDecompose, DisconnectedQuery) {
  Query q = parse_query("E(a,b), E(b,c), F(x,y), F(y,z)");
  OrderedTD td = generic_decompose(q);
  EXPECT_FALSE(validate_td(q, td));
  EXPECT_EQ(td.variables().size(), q.num_vars());
  for (const OrderedTD& t : enumerate_tds(q)) EXPECT_FALSE(validate_td(q, t));
}

TEST(EnumerateTds, FourCycle) {
  Query q = gen_cycle_query(4);
  auto tds = enumerate_tds(q, {2, 64, 8});
  std::set<std::vector<std::vector<VarId>>> shapes;
  for (const auto& td : tds) {
    EXPECT_FALSE(validate_td(q, td));
    std::vector<std::vector<VarId>> bags;
    for (std::size_t k = 0; k < td.size(); ++k) bags.push_back(td.bag_set(k));
    shapes.insert(bags);
  }
  EXPECT_TRUE(shapes.count({{0, 1, 2}, {0, 2, 3}}));
  EXPECT_TRUE(shapes.count({{0, 1, 3}, {1, 2, 3}}));
}

TEST(EnumerateTds, TriangleOnlySingleton) {
  Query q = gen_cycle_query(3);
  auto tds = enumerate_tds(q);
  ASSERT_EQ(tds.size(), 1u);
  EXPECT_EQ(tds[0], OrderedTD::singleton(all_vars(q)));
}

TEST(EnumerateTds, SixPathAdhesionOne) {
  Query q = gen_path_query(6);
  auto tds = enumerate_tds(q, {1, 10, 8});
  EXPECT_EQ(tds.size(), 10u);
  for (std::size_t i = 0; i < tds.size(); ++i) {
    EXPECT_FALSE(validate_td(q, tds[i]));
    EXPECT_LE(tds[i].max_adhesion(), 1u);
    for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(tds[i] == tds[j]);
  }
}

TEST(EnumerateTds, RespectsAdhesionBoundAndCompatibility) {
  for (const Query& q : {gen_path_query(7), gen_cycle_query(6), gen_random_graph_query(5, 0.4, 1)}) {
    for (std::size_t w : {1u, 2u}) {
      for (const auto& td : enumerate_tds(q, {w, 16, 8})) {
        EXPECT_FALSE(validate_td(q, td));
        EXPECT_LE(td.max_adhesion(), w);
        EXPECT_TRUE(is_strongly_compatible(td, derive_ordering(td, degree_rank(q)).order));
      }
    }
  }
}

TEST(ScoreTd, Conventions) {
  Query q = gen_path_query(4);
  TDScore single = score_td(OrderedTD::singleton(all_vars(q)), q);
  EXPECT_EQ(single.max_adhesion, 0u);
  EXPECT_EQ(single.bags, 1u);
  EXPECT_EQ(single.depth, 0u);
  EXPECT_FALSE(single.skew);

  OrderedTD chain({{0, 1}, {1, 2}, {2, 3}, {3, 4}}, {std::nullopt, 0, 1, 2});
  EXPECT_TRUE(preferred(score_td(chain, q), single));
  EXPECT_FALSE(preferred(single, score_td(chain, q)));
  EXPECT_EQ(rank_tds({OrderedTD::singleton(all_vars(q)), chain}, q).front(), chain);
}

TEST(ScoreTd, PrefersSkewedAdhesion) {
  // a and c always sit in column 0 of R, b and d in column 1
  Query q = parse_query("R(a,b), R(c,b), R(c,d), R(a,d)");
  Relation r("R", 2);
  for (Value i = 0; i < 12; ++i) r.add({i % 2, i});
  Database db;
  db.add(r);
  StatsCatalog stats = compute_stats(db);
  OrderedTD over_ac({{0, 1, 2}, {0, 2, 3}}, {std::nullopt, 0});
  OrderedTD over_bd({{0, 1, 3}, {1, 2, 3}}, {std::nullopt, 0});
  TDScore ac = score_td(over_ac, q, &stats);
  TDScore bd = score_td(over_bd, q, &stats);
  ASSERT_TRUE(ac.skew && bd.skew);
  EXPECT_DOUBLE_EQ(*ac.skew, 6.0);
  EXPECT_DOUBLE_EQ(*bd.skew, 1.0);
  EXPECT_TRUE(preferred(ac, bd));
  EXPECT_EQ(rank_tds({over_bd, over_ac}, q, &stats).front(), over_ac);
  EXPECT_EQ(rank_tds({over_bd, over_ac}, q).front(), over_bd);
}

}  // namespace
}  // namespace cltj
