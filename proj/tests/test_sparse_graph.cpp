#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "test_support.hpp"
#include "trajclust/error.hpp"
#include "trajclust/sparse_graph.hpp"

namespace trajclust {
namespace {

using testing::chain_fixture;
using testing::random_ensemble;
using testing::random_graph;

SparseSimGraph msg_of(const Ensemble& e) {
  const MicroclusterSet mcs = build_microclusters(e);
  return build_msg(compute_mca(e, mcs), mcs);
}

std::set<std::pair<int, int>> link_set(const SparseSimGraph& g) {
  std::set<std::pair<int, int>> out;
  for (const Edge& e : g.edges()) out.emplace(e.u, e.v);
  return out;
}

// Sort-based K-th largest incident weight.
std::optional<double> sorted_threshold(const SparseSimGraph& g, std::size_t node, std::size_t k) {
  std::vector<double> w;
  for (const Neighbor& nb : g.neighbors(node)) w.push_back(nb.weight);
  if (w.empty()) return std::nullopt;
  std::sort(w.begin(), w.end(), std::greater<>());
  return w[std::min(k, w.size()) - 1];
}

TEST(Msg, ChainFixtureHasThreeLinks) {
  const SparseSimGraph msg = msg_of(chain_fixture());
  ASSERT_EQ(msg.n_links(), 3u);
  EXPECT_EQ(msg.kind(), GraphKind::kMsg);
  const std::vector<std::tuple<int, int, double>> expected{{0, 1, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(msg.edges()[i].u, std::get<0>(expected[i]));
    EXPECT_EQ(msg.edges()[i].v, std::get<1>(expected[i]));
    EXPECT_EQ(msg.edges()[i].weight, std::get<2>(expected[i]));
  }
  EXPECT_EQ(msg.node_sizes(), (std::vector<std::size_t>{3, 1, 2, 2}));
}

TEST(Msg, AllAgreeEnsembleHasNoLinksBetweenClusters) {
  const SparseSimGraph msg = msg_of(testing::replicated_ensemble({0, 0, 1, 2, 2}, 4));
  EXPECT_EQ(msg.n_nodes(), 3u);
  EXPECT_EQ(msg.n_links(), 0u);
}

TEST(Msg, LinkCountMatchesDenseUpperTriangle) {
  std::mt19937_64 rng(3);
  const Ensemble e = random_ensemble(rng, 100, 8, 4);
  const MicroclusterSet mcs = build_microclusters(e);
  const CoAssocMatrix mca = compute_mca(e, mcs);
  const SparseSimGraph msg = build_msg(mca, mcs);
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < mca.size(); ++i)
    for (std::size_t j = i + 1; j < mca.size(); ++j) {
      if (mca.count(i, j) > 0) {
        ++nonzero;
        ASSERT_EQ(msg.weight(i, j), mca.value(i, j));
        ASSERT_EQ(msg.weight(j, i), mca.value(i, j));
      } else {
        ASSERT_FALSE(msg.weight(i, j).has_value());
      }
    }
  EXPECT_EQ(msg.n_links(), nonzero);
}

TEST(SparseGraph, FromEdgesValidates) {
  const std::vector<std::size_t> sizes{1, 1, 1};
  EXPECT_THROW(SparseSimGraph::from_edges(3, sizes, GraphKind::kMsg, {{0, 0, 0.5}}), Error);
  EXPECT_THROW(SparseSimGraph::from_edges(3, sizes, GraphKind::kMsg, {{0, 3, 0.5}}), Error);
  EXPECT_THROW(SparseSimGraph::from_edges(3, sizes, GraphKind::kMsg, {{0, 1, 0.0}}), Error);
  EXPECT_THROW(SparseSimGraph::from_edges(3, sizes, GraphKind::kMsg, {{0, 1, 0.5}, {1, 0, 0.5}}), Error);
  const SparseSimGraph g = SparseSimGraph::from_edges(3, sizes, GraphKind::kMsg, {{2, 0, 0.25}, {1, 0, 0.5}});
  EXPECT_EQ(g.edges()[0].u, 0);
  EXPECT_EQ(g.edges()[0].v, 1);
  EXPECT_EQ(g.edges()[1].v, 2);
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.neighbors(2)[0].node, 0);
}

TEST(EliteThresholds, OrderStatisticWithTies) {
  // Node 0 has incident weights 0.9, 0.5, 0.5, 0.1.
  const SparseSimGraph g = SparseSimGraph::from_edges(
      5, {1, 1, 1, 1, 1}, GraphKind::kMsg, {{0, 1, 0.9}, {0, 2, 0.5}, {0, 3, 0.5}, {0, 4, 0.1}});
  EXPECT_EQ(*elite_thresholds(g, 1)[0], 0.9);
  EXPECT_EQ(*elite_thresholds(g, 2)[0], 0.5);
  EXPECT_EQ(*elite_thresholds(g, 3)[0], 0.5);
  EXPECT_EQ(*elite_thresholds(g, 4)[0], 0.1);
  // Two links tie at the 2nd largest: both survive at K=2.
  const SparseSimGraph keng = build_keng(g, 2);
  EXPECT_TRUE(keng.weight(0, 2).has_value());
  EXPECT_TRUE(keng.weight(0, 3).has_value());
}

TEST(EliteThresholds, DegreeBelowKFallsBackToMinimum) {
  const SparseSimGraph g = SparseSimGraph::from_edges(3, {1, 1, 1}, GraphKind::kMsg, {{0, 1, 0.7}});
  const EliteThresholds t = elite_thresholds(g, 8);
  EXPECT_EQ(*t[0], 0.7);
  EXPECT_TRUE(t.isolated(2));
  EXPECT_FALSE(t.isolated(1));
  EXPECT_THROW(elite_thresholds(g, 0), Error);
}

TEST(EliteThresholds, MatchSortOracle) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const SparseSimGraph g = random_graph(rng, 60, 0.2);
    for (std::size_t k : {1, 2, 3, 5, 8, 13, 60}) {
      const EliteThresholds t = elite_thresholds(g, k);
      for (std::size_t i = 0; i < g.n_nodes(); ++i) ASSERT_EQ(t[i], sorted_threshold(g, i, k));
    }
  }
}

TEST(Keng, PathWithEqualWeightsKeepsEveryLink) {
  const SparseSimGraph g = SparseSimGraph::from_edges(4, {1, 1, 1, 1}, GraphKind::kMsg,
                                                      {{0, 1, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}});
  const SparseSimGraph keng = build_keng(g, 1);
  EXPECT_EQ(keng.n_links(), 3u);
  EXPECT_EQ(keng.kind(), GraphKind::kKeng);
  EXPECT_DOUBLE_EQ(ratio_pl(g, keng), 1.0);
}

TEST(Keng, KeepsLinkWhenEitherEndpointRanksItElite) {
  // Hub 0 links to 1..4 with decreasing weights; leaves have no other links.
  const SparseSimGraph g = SparseSimGraph::from_edges(
      6, {1, 1, 1, 1, 1, 1}, GraphKind::kMsg, {{0, 1, 0.9}, {0, 2, 0.8}, {0, 3, 0.7}, {0, 4, 0.6}, {4, 5, 0.95}});
  const SparseSimGraph keng = build_keng(g, 1);
  // (0,2), (0,3) are top-1 for the leaves; (0,4) is nobody's top-1.
  EXPECT_TRUE(keng.weight(0, 1).has_value());
  EXPECT_TRUE(keng.weight(0, 2).has_value());
  EXPECT_TRUE(keng.weight(0, 3).has_value());
  EXPECT_FALSE(keng.weight(0, 4).has_value());
  EXPECT_TRUE(keng.weight(4, 5).has_value());
}

TEST(Keng, PropertiesOnRandomGraphs) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const SparseSimGraph msg = random_graph(rng, 50, 0.15);
    std::set<std::pair<int, int>> previous;
    for (std::size_t k = 1; k <= 12; ++k) {
      const SparseSimGraph keng = build_keng(msg, k);
      const EliteThresholds t = elite_thresholds(msg, k);
      auto elite = [&](std::size_t i, std::size_t j) { return *msg.weight(i, j) >= *t[i]; };
      for (const Edge& e : msg.edges()) {
        const auto i = static_cast<std::size_t>(e.u), j = static_cast<std::size_t>(e.v);
        const bool kept_ij = elite(i, j) || elite(j, i);
        ASSERT_EQ(keng.weight(i, j), keng.weight(j, i));
        ASSERT_EQ(keng.weight(i, j).has_value(), kept_ij);
        if (kept_ij) {
          ASSERT_EQ(*keng.weight(i, j), e.weight);
        }
      }
      for (std::size_t i = 0; i < msg.n_nodes(); ++i)
        if (msg.degree(i) > 0) {
          ASSERT_GT(keng.degree(i), 0u);
        }
      const auto links = link_set(keng);
      ASSERT_TRUE(std::includes(links.begin(), links.end(), previous.begin(), previous.end()));
      previous = links;
      ASSERT_DOUBLE_EQ(ratio_pl(msg, keng),
                       static_cast<double>(keng.n_links()) / static_cast<double>(msg.n_links()));
    }
    EXPECT_EQ(link_set(build_keng(msg, msg.n_nodes() - 1)), link_set(msg));
  }
}

TEST(Keng, RatioPlRejectsEmptyMsg) {
  const SparseSimGraph g = SparseSimGraph::from_edges(2, {1, 1}, GraphKind::kMsg, {});
  try {
    ratio_pl(g, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumeric);
  }
}

TEST(GlobalThreshold, CanIsolateNodesUnlikeEliteSelection) {
  const SparseSimGraph g = SparseSimGraph::from_edges(4, {1, 1, 1, 1}, GraphKind::kMsg,
                                                      {{0, 1, 0.9}, {1, 2, 0.8}, {2, 3, 0.2}});
  const SparseSimGraph global = build_global_threshold_graph(g, 0.5);
  EXPECT_EQ(global.degree(3), 0u);
  EXPECT_EQ(global.kind(), GraphKind::kGlobalThreshold);
  EXPECT_GT(build_keng(g, 1).degree(3), 0u);
}

TEST(EdgeList, RoundTrip) {
  std::mt19937_64 rng(2);
  const SparseSimGraph g = random_graph(rng, 30, 0.3);
  std::stringstream buf;
  write_edge_list(buf, g);
  EXPECT_EQ(buf.str().rfind("n_nodes 30 kind MSG\n", 0), 0u);
  const SparseSimGraph back = read_edge_list(buf);
  ASSERT_EQ(back.n_links(), g.n_links());
  for (std::size_t i = 0; i < g.n_links(); ++i) {
    EXPECT_EQ(back.edges()[i].u, g.edges()[i].u);
    EXPECT_EQ(back.edges()[i].v, g.edges()[i].v);
    EXPECT_EQ(back.edges()[i].weight, g.edges()[i].weight);
  }
  std::stringstream bad("n_nodes 2 kind MSG\n0 5 0.5\n");
  EXPECT_THROW(read_edge_list(bad), Error);
}

}  // namespace
}  // namespace trajclust
