#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "trajclust/error.hpp"
#include "trajclust/trajectory.hpp"

namespace trajclust {
namespace {

using testing::random_graph;

// Cosine between explicitly concatenated step distributions.
RowMatrix explicit_trajectory_similarity(const TransitionMatrix& transition, std::size_t steps) {
  const RowMatrix p = transition.to_dense();
  const Eigen::Index n = p.rows();
  RowMatrix traj(n, n * static_cast<Eigen::Index>(steps));
  RowMatrix power = p;
  for (std::size_t t = 0; t < steps; ++t) {
    traj.middleCols(static_cast<Eigen::Index>(t) * n, n) = power;
    power = p * power;
  }
  RowMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = traj.row(i).dot(traj.row(j)) / (traj.row(i).norm() * traj.row(j).norm());
  return out;
}

TEST(Transition, SizeWeightedFixture) {
  // Sizes 4, 1, 2; y3 links to y1 and y2 with equal weight.
  const SparseSimGraph g = SparseSimGraph::from_edges(3, {4, 1, 2}, GraphKind::kKeng, {{0, 2, 0.7}, {1, 2, 0.7}});
  const TransitionMatrix p = build_transition(g);
  EXPECT_NEAR(p(2, 0), 0.8, 1e-15);
  EXPECT_NEAR(p(2, 1), 0.2, 1e-15);
  EXPECT_NEAR(p(2, 0) / p(2, 1), 4.0, 1e-12);
  EXPECT_EQ(p(0, 2), 1.0);
  EXPECT_EQ(p(1, 2), 1.0);
  EXPECT_EQ(p(2, 2), 0.0);
}

TEST(Transition, StarWithEqualSizesIsUniform) {
  const SparseSimGraph g = SparseSimGraph::from_edges(5, {2, 2, 2, 2, 2}, GraphKind::kKeng,
                                                      {{0, 1, 0.3}, {0, 2, 0.3}, {0, 3, 0.3}, {0, 4, 0.3}});
  const TransitionMatrix p = build_transition(g);
  for (std::size_t j = 1; j < 5; ++j) EXPECT_DOUBLE_EQ(p(0, j), 0.25);
}

TEST(Transition, IsolatedNodeKeepsItsMass) {
  const SparseSimGraph g = SparseSimGraph::from_edges(3, {1, 1, 1}, GraphKind::kKeng, {{0, 1, 1.0}});
  const TransitionMatrix p = build_transition(g);
  EXPECT_EQ(p(2, 2), 1.0);
  EXPECT_EQ(p.n_components(), 2u);
  EXPECT_EQ(p.component_of(0), p.component_of(1));
  EXPECT_NE(p.component_of(0), p.component_of(2));
}

TEST(Transition, RowsSumToOne) {
  std::mt19937_64 rng(4);
  const SparseSimGraph g = build_keng(random_graph(rng, 200, 0.05, 10, 20), 4);
  const TransitionMatrix p = build_transition(g);
  for (std::size_t i = 0; i < p.size(); ++i) {
    double s = 0.0;
    for (const Transition& t : p.row(i)) {
      s += t.probability;
      if (static_cast<std::size_t>(t.to) != i) {
        ASSERT_TRUE(g.weight(i, static_cast<std::size_t>(t.to)).has_value());
      }
    }
    ASSERT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Walk, FirstStepIsTransitionAndPeriodTwoWalkReturns) {
  const SparseSimGraph g = SparseSimGraph::from_edges(2, {1, 1}, GraphKind::kKeng, {{0, 1, 0.5}});
  const TransitionMatrix p = build_transition(g);
  WalkDistributions walk(p);
  EXPECT_TRUE(walk.next().isApprox(p.to_dense()));
  EXPECT_EQ(walk.step(), 1u);
  EXPECT_TRUE(walk.next().isApprox(RowMatrix::Identity(2, 2)));
}

TEST(Walk, MatchesDenseMatrixPowers) {
  std::mt19937_64 rng(6);
  const SparseSimGraph g = build_keng(random_graph(rng, 80, 0.1), 3);
  const TransitionMatrix p = build_transition(g);
  const RowMatrix dense = p.to_dense();
  WalkDistributions walk(p);
  RowMatrix power = dense;
  for (int t = 1; t <= 3; ++t) {
    ASSERT_LE((walk.next() - power).cwiseAbs().maxCoeff(), 1e-10);
    power = dense * power;
  }
}

TEST(Walk, StaysStochasticAndInsideComponents) {
  std::mt19937_64 rng(7);
  const SparseSimGraph g = build_keng(random_graph(rng, 60, 0.03), 2);
  const TransitionMatrix p = build_transition(g);
  ASSERT_GT(p.n_components(), 1u);
  WalkDistributions walk(p);
  const RowMatrix* dist = nullptr;
  for (int t = 0; t < 128; ++t) dist = &walk.next();
  for (Eigen::Index i = 0; i < dist->rows(); ++i) {
    ASSERT_NEAR(dist->row(i).sum(), 1.0, 1e-10);
    for (Eigen::Index j = 0; j < dist->cols(); ++j)
      if (p.component_of(static_cast<std::size_t>(i)) != p.component_of(static_cast<std::size_t>(j))) {
        ASSERT_EQ((*dist)(i, j), 0.0);
      }
  }
}

TEST(Walk, RejectsOpenNodeSubsets) {
  const SparseSimGraph g = SparseSimGraph::from_edges(3, {1, 1, 1}, GraphKind::kKeng, {{0, 1, 1.0}});
  const TransitionMatrix p = build_transition(g);
  EXPECT_THROW(WalkDistributions(p, {0}), Error);
  EXPECT_NO_THROW(WalkDistributions(p, {2}));
}

TEST(Pts, MatchesExplicitTrajectoryCosine) {
  std::mt19937_64 rng(9);
  for (std::size_t steps : {1, 2, 5, 8, 16}) {
    const SparseSimGraph g = build_keng(random_graph(rng, 100, 0.06), 3);
    const TransitionMatrix p = build_transition(g);
    const SimilarityMatrix pts = compute_pts(p, steps);
    const RowMatrix oracle = explicit_trajectory_similarity(p, steps);
    EXPECT_LE((pts.values() - oracle).cwiseAbs().maxCoeff(), 1e-10) << "T=" << steps;
  }
}

TEST(Pts, SymmetricUnitDiagonalBounded) {
  std::mt19937_64 rng(10);
  const SparseSimGraph g = build_keng(random_graph(rng, 120, 0.04), 2);
  const SimilarityMatrix pts = compute_pts(build_transition(g), 6);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(pts(i, i), 1.0);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      ASSERT_EQ(pts(i, j), pts(j, i));
      ASSERT_GE(pts(i, j), 0.0);
      ASSERT_LE(pts(i, j), 1.0);
    }
  }
  EXPECT_EQ(pts.storage_bytes(), 8u * 120u * 120u);
}

TEST(Pts, IsolatedNodesAndComponentsAreOrthogonal) {
  const SparseSimGraph g = SparseSimGraph::from_edges(5, {1, 1, 1, 1, 1}, GraphKind::kKeng, {{0, 1, 0.5}, {2, 3, 0.5}});
  const TransitionMatrix p = build_transition(g);
  const SimilarityMatrix pts = compute_pts(p, 4);
  EXPECT_EQ(pts(0, 2), 0.0);
  EXPECT_EQ(pts(1, 3), 0.0);
  EXPECT_EQ(pts(4, 0), 0.0);
  EXPECT_EQ(pts(4, 4), 1.0);
}

// In a bipartite graph a walker alternates sides, so walkers starting on
// opposite sides never share support at any step.
TEST(Pts, BipartiteChainSeparatesParityClasses) {
  const SparseSimGraph g = SparseSimGraph::from_edges(4, {3, 1, 2, 2}, GraphKind::kKeng,
                                                      {{0, 1, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}});
  const TransitionMatrix p = build_transition(g);
  for (std::size_t steps : {1, 2, 3, 7, 20}) {
    const SimilarityMatrix pts = compute_pts(p, steps);
    EXPECT_EQ(pts(0, 1), 0.0);
    EXPECT_EQ(pts(2, 3), 0.0);
    EXPECT_EQ(pts(0, 3), 0.0);
    EXPECT_GT(pts(0, 2), 0.0);
    EXPECT_GT(pts(1, 3), 0.0);
  }
}

TEST(Pts, PermutationEquivariant) {
  std::mt19937_64 rng(12);
  const SparseSimGraph g = build_keng(random_graph(rng, 40, 0.15), 3);
  std::vector<std::int32_t> perm(40);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    edges.push_back({perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)], e.weight});
  std::vector<std::size_t> sizes(40);
  for (std::size_t i = 0; i < 40; ++i) sizes[static_cast<std::size_t>(perm[i])] = g.node_sizes()[i];
  const SparseSimGraph h = SparseSimGraph::from_edges(40, sizes, GraphKind::kKeng, edges);
  const SimilarityMatrix a = compute_pts(build_transition(g), 5);
  const SimilarityMatrix b = compute_pts(build_transition(h), 5);
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 40; ++j)
      ASSERT_NEAR(a(i, j), b(static_cast<std::size_t>(perm[i]), static_cast<std::size_t>(perm[j])), 1e-12);
}

TEST(Pts, RejectsZeroSteps) {
  const SparseSimGraph g = SparseSimGraph::from_edges(2, {1, 1}, GraphKind::kKeng, {{0, 1, 0.5}});
  try {
    compute_pts(build_transition(g), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUsage);
  }
}

TEST(Defaults, WalkParameterIsHalfRootFloored) {
  EXPECT_EQ(default_walk_parameter(242), 7u);
  EXPECT_EQ(default_walk_parameter(1), 1u);
  EXPECT_EQ(default_walk_parameter(3), 1u);
  EXPECT_EQ(default_walk_parameter(16), 2u);
  EXPECT_EQ(default_walk_parameter(2000), 22u);
  for (std::size_t n = 1; n < 5000; ++n)
    ASSERT_EQ(default_walk_parameter(n),
              std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<long double>(n)) / 2))));
}

}  // namespace
}  // namespace trajclust
