#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trajclust/ensemble.hpp"
#include "trajclust/similarity.hpp"

namespace trajclust {

struct FeatureDataset {
  RowMatrix features;                       // N x d
  std::optional<std::vector<Label>> truth;  // dense 0-based classes

  std::size_t n_objects() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t n_features() const { return static_cast<std::size_t>(features.cols()); }
};

struct KMeansOptions {
  std::size_t max_iterations = 100;
  double tolerance = 1e-6;  // relative centroid shift
  std::size_t restarts = 1;
};

struct KMeansResult {
  std::vector<Label> labels;  // canonical, first-appearance order
  RowMatrix centroids;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

// Lloyd iteration with k-means++ seeding. Empty clusters are reseeded from the
// point farthest from its assigned centroid. With restarts > 1 the run with the
// lowest inertia wins.
KMeansResult kmeans(const RowMatrix& points, std::size_t clusters, std::uint64_t seed,
                    const KMeansOptions& options = {});

struct RpclOptions {
  double winner_rate = 0.05;
  double rival_rate = 0.002;
  std::size_t epochs = 50;
  double prune_share = 0.01;  // units winning fewer samples than this share are dropped
};

struct RpclResult {
  std::vector<Label> labels;
  std::size_t surviving_units = 0;
  std::vector<std::string> warnings;
};

// Rival penalized competitive learning: per sample the nearest unit moves
// toward it and the second nearest is pushed away.
RpclResult rpcl(const RowMatrix& points, std::size_t initial_units, std::uint64_t seed,
                const RpclOptions& options = {});

enum class PoolAlgorithm { kKMeans, kRpcl };
const char* to_string(PoolAlgorithm algorithm);

struct PoolMember {
  PoolAlgorithm algorithm;
  std::size_t requested_clusters;
  std::size_t found_clusters;
  std::uint64_t seed;
};

struct ClusteringPool {
  std::size_t n_objects = 0;
  std::vector<std::vector<Label>> labelings;
  std::vector<PoolMember> members;

  std::size_t size() const { return labelings.size(); }
};

// min(floor(sqrt(N)/2), 50).
std::size_t pool_cluster_upper_bound(std::size_t n_objects);

// First half k-means, second half RPCL, cluster counts uniform in
// [2, pool_cluster_upper_bound(N)]. Members run on up to `threads` workers;
// the result does not depend on the thread count.
ClusteringPool build_pool(const FeatureDataset& data, std::size_t pool_size, std::uint64_t seed,
                          std::size_t threads = 1);

// Draws `size` distinct members uniformly at random; returns their indices in
// draw order.
std::vector<std::size_t> draw_members(const ClusteringPool& pool, std::size_t size,
                                      std::uint64_t seed);
Ensemble make_ensemble(const ClusteringPool& pool, const std::vector<std::size_t>& members);

// Independent seed for stream `index` derived from `seed` (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace trajclust
