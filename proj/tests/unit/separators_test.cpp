#include <gtest/gtest.h>

#include <set>

#include "cltj/error.hpp"
#include "cltj/maxflow.hpp"
#include "cltj/random.hpp"
#include "cltj/separators.hpp"
#include "oracles.hpp"

namespace cltj {
namespace {

Graph path(std::size_t n) {
  Graph g(n);
  for (NodeId v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

Graph cycle(std::size_t n) {
  Graph g = path(n);
  g.add_edge(0, static_cast<NodeId>(n - 1));
  return g;
}

Graph clique(std::size_t n) {
  Graph g(n);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) g.add_edge(a, b);
  }
  return g;
}

TEST(FlowNetworkTest, SmallNetwork) {
  FlowNetwork net(4);
  net.add_arc(0, 1, 3);
  net.add_arc(0, 2, 2);
  net.add_arc(1, 2, 1);
  net.add_arc(1, 3, 2);
  net.add_arc(2, 3, 3);
  EXPECT_EQ(net.max_flow(0, 3), 5);
  auto side = net.source_side(0);
  EXPECT_TRUE(side[0]);
  EXPECT_FALSE(side[3]);
}

TEST(FlowNetworkTest, StopsAtLimit) {
  FlowNetwork net(2);
  net.add_arc(0, 1, 10);
  EXPECT_GT(net.max_flow(0, 1, 3), 3);
}

TEST(NodeSets, Helpers) {
  EXPECT_EQ(members(make_set({4, 1})), (std::vector<NodeId>{1, 4}));
  EXPECT_TRUE(separator_less(make_set({3}), make_set({0, 1})));
  EXPECT_TRUE(separator_less(make_set({0, 2}), make_set({1, 2})));
  EXPECT_TRUE(separator_less(make_set({0, 3}), make_set({1, 2})));
  EXPECT_FALSE(separator_less(make_set({1, 2}), make_set({1, 2})));
  EXPECT_EQ(components(path(4), make_set({0, 1, 3})), (std::vector<NodeSet>{make_set({0, 1}), make_set({3})}));
}

TEST(MinConstrainedSeparator, FourCycleTieBreak) {
  auto r = min_constrained_separator({cycle(4), 0, 0, 0});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->separator, make_set({0, 2}));
}

TEST(MinConstrainedSeparator, PathPicksSmallestComponent) {
  auto r = min_constrained_separator({path(3), 0, 0, 0});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->separator, make_set({1}));
  EXPECT_EQ(r->component_union, make_set({0}));
}

TEST(MinConstrainedSeparator, ExcludedMiddleIsInfeasible) {
  EXPECT_FALSE(min_constrained_separator({path(3), 0, 0, make_set({1})}));
}

TEST(MinConstrainedSeparator, ConstraintShapesU) {
  // C = {3}: U is the component holding node 3
  auto r = min_constrained_separator({path(4), make_set({3}), 0, 0});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->separator, make_set({1}));
  EXPECT_EQ(r->component_union, make_set({2, 3}));
}

TEST(MinConstrainedSeparator, CliqueHasNone) {
  EXPECT_FALSE(min_constrained_separator({clique(4), 0, 0, 0}));
}

TEST(MinConstrainedSeparator, DisconnectedGraphAllowsEmptySet) {
  Graph g(3);
  g.add_edge(0, 1);
  auto r = min_constrained_separator({g, 0, 0, 0});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->separator, 0u);
}

TEST(MinConstrainedSeparator, MatchesBruteForce) {
  SplitMix64 rng(77);
  for (int round = 0; round < 400; ++round) {
    const std::size_t n = 2 + rng.next() % 6;
    Graph g = testing::random_connected_graph(rng.next(), n, 0.3 + 0.4 * rng.next_unit());
    SeparatorProblem p{g, 0, 0, 0};
    for (NodeId v = 0; v < n; ++v) {
      switch (rng.next() % 8) {
        case 0: p.include |= node_bit(v); break;
        case 1: p.exclude |= node_bit(v); break;
        case 2: p.constraint |= node_bit(v); break;
        default: break;
      }
    }
    auto expected = testing::brute_min_separator(p);
    auto got = min_constrained_separator(p);
    ASSERT_EQ(got.has_value(), expected.has_value()) << "round " << round;
    if (!got) continue;
    EXPECT_EQ(set_size(got->separator), *expected);
    EXPECT_EQ(got->separator & p.include, p.include);
    EXPECT_EQ(got->separator & p.exclude, 0u);
    EXPECT_TRUE(testing::brute_is_separator(g, got->separator, p.constraint));
    EXPECT_EQ(p.constraint & ~(got->separator | got->component_union), 0u);
  }
}

TEST(EnumerateSeparators, FourPath) {
  EXPECT_EQ(enumerate_constrained_separators(path(4), 0),
            (std::vector<NodeSet>{make_set({1}), make_set({2}), make_set({0, 2}), make_set({1, 2}),
                                  make_set({1, 3})}));
}

TEST(EnumerateSeparators, ConstrainedFourPath) {
  auto seps = enumerate_constrained_separators(path(4), make_set({0}));
  EXPECT_FALSE(seps.empty());
  for (NodeSet s : seps) EXPECT_TRUE(testing::brute_is_separator(path(4), s, make_set({0})));
  EXPECT_EQ(seps, testing::brute_separators(path(4), make_set({0})));
}

TEST(EnumerateSeparators, CliqueIsEmpty) { EXPECT_TRUE(enumerate_constrained_separators(clique(4), 0).empty()); }

TEST(EnumerateSeparators, TruncationAndSizeBound) {
  auto two = enumerate_constrained_separators(cycle(6), 0, 2);
  EXPECT_EQ(two.size(), 2u);
  auto bounded = enumerate_constrained_separators(cycle(6), 0, std::nullopt, 2);
  for (NodeSet s : bounded) EXPECT_EQ(set_size(s), 2u);
  EXPECT_EQ(bounded.size(), 9u);
}

TEST(EnumerateSeparators, MatchesExhaustiveSearch) {
  SplitMix64 rng(123);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 2 + rng.next() % 5;
    Graph g = testing::random_connected_graph(rng.next(), n, 0.35);
    NodeSet c = rng.next() % 2 == 0 ? 0 : node_bit(static_cast<NodeId>(rng.next() % n));
    EXPECT_EQ(enumerate_constrained_separators(g, c), testing::brute_separators(g, c)) << "round " << round;
  }
}

TEST(InducedSubgraph, Renumbers) {
  InducedGraph ind = induced_subgraph(cycle(5), make_set({1, 2, 4}));
  EXPECT_EQ(ind.original, (std::vector<NodeId>{1, 2, 4}));
  EXPECT_EQ(ind.g.num_edges(), 1u);
  EXPECT_TRUE(ind.g.has_edge(0, 1));
}

TEST(SeparatorResultTest, RejectsNonSeparators) {
  EXPECT_THROW(make_separator_result(path(3), make_set({0}), 0), ContractViolation);
  EXPECT_THROW(make_separator_result(path(3), make_set({1}), make_set({0, 2})), ContractViolation);
}

}  // namespace
}  // namespace cltj
