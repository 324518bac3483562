#include <gtest/gtest.h>

#include "stereotrust/baselines.hpp"
#include "support/oracles.hpp"

using namespace stereotrust;

namespace {

TrustGraph chain() {
  // 0 -> 1 -> 2 -> 3, plus a weak shortcut 0 -> 4 -> 3
  TrustGraph g(5);
  g.add_edge(0, 1, {9, 1});
  g.add_edge(1, 2, {8, 2});
  g.add_edge(2, 3, {1, 3});
  g.add_edge(0, 4, {1, 1});
  g.add_edge(4, 3, {5, 0});
  g.finalize();
  return g;
}

}  // namespace

TEST(EigenTrust, MatchesDenseOracleOnRandomGraphs) {
  Rng rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 9);
    TrustGraph g(n);
    for (AgentId i = 0; i < n; ++i) {
      for (AgentId j = 0; j < n; ++j) {
        if (i != j && bernoulli(rng, 0.4)) {
          g.add_edge(i, j, {static_cast<double>(uniform_index(rng, 10)), static_cast<double>(uniform_index(rng, 6))});
        }
      }
    }
    g.finalize();
    std::vector<AgentId> pre{0};
    if (n > 3) pre.push_back(3);
    const auto fast = eigentrust(g, pre, {0.5, 1e-12});
    const auto oracle = test_support::dense_eigentrust(g, pre, 0.5);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(fast[i], oracle[i], 1e-6) << "trial " << trial << " node " << i;
      total += fast[i];
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(EigenTrust, RequiresPretrustedPeers) {
  const auto g = chain();
  EXPECT_THROW(eigentrust(g, std::vector<AgentId>{}), std::domain_error);
}

TEST(EigenTrust, EstimateWeighsIncomingEdges) {
  const auto g = chain();
  const std::vector<double> global{0.0, 0.0, 0.25, 0.0, 0.75};
  const auto e = eigentrust_estimate(g, global, 3);
  ASSERT_TRUE(e);
  EXPECT_NEAR(*e, 0.25 * expected_trust({1, 3}) + 0.75 * expected_trust({5, 0}), 1e-15);
  EXPECT_FALSE(eigentrust_estimate(g, global, 0));
}

TEST(Transitive, ShortestPathPrefersStrongerBottleneck) {
  const auto g = chain();
  // 0->4->3 is the only two-hop path
  EXPECT_DOUBLE_EQ(*transitive_shortest_path(g, 0, 3), expected_trust({5, 0}));
  EXPECT_DOUBLE_EQ(*transitive_shortest_path(g, 0, 1), expected_trust({9, 1}));
  EXPECT_FALSE(transitive_shortest_path(g, 3, 0));
}

TEST(Transitive, MostReliablePathWalksGreedily) {
  const auto g = chain();
  // greedy walk 0 -> 1 -> 2 reaches 3 through the weak final edge
  EXPECT_DOUBLE_EQ(*transitive_most_reliable_path(g, 0, 3), expected_trust({1, 3}));
  EXPECT_FALSE(transitive_most_reliable_path(g, 0, 3, 2));
  EXPECT_FALSE(transitive_most_reliable_path(g, 3, 0));
}

TEST(Transitive, MostReliableDetourLosesCoverage) {
  // the greedy walk follows 0->1 into a dead end although 0->2->3 exists
  TrustGraph g(4);
  g.add_edge(0, 1, {9, 0});
  g.add_edge(0, 2, {1, 1});
  g.add_edge(2, 3, {4, 0});
  g.finalize();
  EXPECT_TRUE(transitive_shortest_path(g, 0, 3));
  EXPECT_FALSE(transitive_most_reliable_path(g, 0, 3));
}

TEST(FeedbackAggregation, AveragesAllReports) {
  // author 0 reviewed once; raters 1 (3 ok / 1 bad) and 2 (1 ok / 1 bad)
  std::vector<Review> reviews{{0, 0, 0, 0, 0.8}};
  std::vector<Rating> ratings;
  std::uint64_t seq = 0;
  auto rate = [&](AgentId r, bool ok) { ratings.push_back({r, 0, ok ? 1.0 : 0.0, 0.8, ok, ++seq}); };
  rate(1, true), rate(1, true), rate(1, true), rate(1, false), rate(2, true), rate(2, false);
  World w(WorldConfig{}, {"a", "b", "c", "d"}, {true, true, true, true}, {"c0", "c1", "c2"}, reviews, ratings);
  EXPECT_DOUBLE_EQ(*feedback_aggregation(w, 3, 0), (0.75 + 0.5) / 2.0);
  EXPECT_DOUBLE_EQ(*feedback_aggregation(w, 2, 0), 0.75);
  EXPECT_FALSE(feedback_aggregation(w, 3, 1));
}
