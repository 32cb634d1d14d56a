#include "trajclust/generators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "trajclust/error.hpp"

namespace trajclust {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

double squared_distance(const RowMatrix& a, Eigen::Index i, const RowMatrix& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

// Nearest centroid per point; ties go to the lower centroid index.
double assign(const RowMatrix& points, const RowMatrix& centroids, std::vector<Label>& labels,
              std::vector<double>& dist) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    Label arg = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double d = squared_distance(points, i, centroids, c);
      if (d < best) {
        best = d;
        arg = static_cast<Label>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = arg;
    dist[static_cast<std::size_t>(i)] = best;
    inertia += best;
  }
  return inertia;
}

RowMatrix kmeanspp_init(const RowMatrix& points, std::size_t clusters, std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  RowMatrix centroids(static_cast<Eigen::Index>(clusters), points.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centroids.row(0) = points.row(pick(rng));
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < clusters; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& d = d2[static_cast<std::size_t>(i)];
      d = std::min(d, squared_distance(points, i, centroids, static_cast<Eigen::Index>(c - 1)));
      total += d;
    }
    Eigen::Index chosen = pick(rng);
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng);
      for (Eigen::Index i = 0; i < n; ++i) {
        r -= d2[static_cast<std::size_t>(i)];
        if (r <= 0.0) {
          chosen = i;
          break;
        }
      }
    }
    centroids.row(static_cast<Eigen::Index>(c)) = points.row(chosen);
  }
  return centroids;
}

KMeansResult kmeans_once(const RowMatrix& points, std::size_t clusters, std::uint64_t seed,
                         const KMeansOptions& options) {
  const Eigen::Index n = points.rows();
  const auto k = static_cast<Eigen::Index>(clusters);
  std::mt19937_64 rng(seed);
  RowMatrix centroids = kmeanspp_init(points, clusters, rng);
  std::vector<Label> labels(static_cast<std::size_t>(n), 0);
  std::vector<double> dist(static_cast<std::size_t>(n), 0.0);
  std::vector<std::size_t> counts(clusters);
  KMeansResult result;

  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    assign(points, centroids, labels, dist);

    // Repair empty clusters from the worst-served points.
    std::fill(counts.begin(), counts.end(), 0);
    for (Label l : labels) ++counts[static_cast<std::size_t>(l)];
    for (std::size_t c = 0; c < clusters; ++c) {
      if (counts[c] > 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (counts[static_cast<std::size_t>(labels[i])] > 1 && dist[i] > far_d) {
          far_d = dist[i];
          far = i;
        }
      }
      if (far_d < 0.0) break;  // fewer distinct points than clusters
      --counts[static_cast<std::size_t>(labels[far])];
      labels[far] = static_cast<Label>(c);
      dist[far] = 0.0;
      counts[c] = 1;
    }

    RowMatrix next = RowMatrix::Zero(k, points.cols());
    for (Eigen::Index i = 0; i < n; ++i) next.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0)
        next.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      else
        next.row(c) = centroids.row(c);
    }
    const double shift = (next - centroids).norm();
    const double scale = std::max(next.norm(), std::numeric_limits<double>::min());
    centroids = std::move(next);
    result.iterations = iter + 1;
    if (shift <= options.tolerance * scale) break;
  }
  result.inertia = assign(points, centroids, labels, dist);
  result.labels = canonicalize(std::span<const Label>(labels));
  result.centroids = std::move(centroids);
  return result;
}

}  // namespace

KMeansResult kmeans(const RowMatrix& points, std::size_t clusters, std::uint64_t seed,
                    const KMeansOptions& options) {
  const auto n = static_cast<std::size_t>(points.rows());
  require(n >= 1, ErrorCode::kInvalidInput, "k-means needs at least one point");
  require(clusters >= 1, ErrorCode::kUsage, "k-means needs at least one cluster");
  require(clusters <= n, ErrorCode::kUsage,
          "k-means cluster count " + std::to_string(clusters) + " exceeds point count " +
              std::to_string(n));
  KMeansResult best;
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    KMeansResult run = kmeans_once(points, clusters, restarts == 1 ? seed : derive_seed(seed, r), options);
    if (r == 0 || run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

RpclResult rpcl(const RowMatrix& points, std::size_t initial_units, std::uint64_t seed,
                const RpclOptions& options) {
  const auto n = static_cast<std::size_t>(points.rows());
  require(initial_units >= 2, ErrorCode::kUsage, "RPCL needs at least two initial units");
  require(initial_units <= n, ErrorCode::kUsage, "RPCL unit count exceeds point count");
  require(options.winner_rate > 0.0 && options.winner_rate < 1.0, ErrorCode::kUsage,
          "RPCL winner rate must lie in (0, 1)");
  require(options.rival_rate >= 0.0 && options.rival_rate < options.winner_rate, ErrorCode::kUsage,
          "RPCL rival rate must lie in [0, winner rate)");

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto units_n = static_cast<Eigen::Index>(initial_units);
  RowMatrix units(units_n, points.cols());
  for (Eigen::Index u = 0; u < units_n; ++u)
    units.row(u) = points.row(static_cast<Eigen::Index>(order[static_cast<std::size_t>(u)]));

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      const auto i = static_cast<Eigen::Index>(idx);
      Eigen::Index winner = -1, rival = -1;
      double dw = std::numeric_limits<double>::infinity(), dr = dw;
      for (Eigen::Index u = 0; u < units_n; ++u) {
        const double d = squared_distance(points, i, units, u);
        if (d < dw) {
          rival = winner;
          dr = dw;
          winner = u;
          dw = d;
        } else if (d < dr) {
          rival = u;
          dr = d;
        }
      }
      units.row(winner) += options.winner_rate * (points.row(i) - units.row(winner));
      if (rival >= 0) units.row(rival) -= options.rival_rate * (points.row(i) - units.row(rival));
    }
  }

  std::vector<Label> labels(n);
  std::vector<double> dist(n);
  assign(points, units, labels, dist);
  std::vector<std::size_t> wins(initial_units, 0);
  for (Label l : labels) ++wins[static_cast<std::size_t>(l)];
  const double min_wins = options.prune_share * static_cast<double>(n);
  std::vector<Eigen::Index> keep;
  for (std::size_t u = 0; u < initial_units; ++u)
    if (static_cast<double>(wins[u]) >= min_wins && wins[u] > 0) keep.push_back(static_cast<Eigen::Index>(u));

  RpclResult result;
  if (keep.empty()) {
    result.labels.assign(n, 0);
    result.surviving_units = 1;
    result.warnings.push_back("RPCL pruned every unit; falling back to a single cluster");
    return result;
  }
  RowMatrix survivors(static_cast<Eigen::Index>(keep.size()), points.cols());
  for (std::size_t s = 0; s < keep.size(); ++s) survivors.row(static_cast<Eigen::Index>(s)) = units.row(keep[s]);
  assign(points, survivors, labels, dist);
  result.labels = canonicalize(std::span<const Label>(labels));
  result.surviving_units = static_cast<std::size_t>(
      *std::max_element(result.labels.begin(), result.labels.end()) + 1);
  return result;
}

const char* to_string(PoolAlgorithm algorithm) {
  return algorithm == PoolAlgorithm::kKMeans ? "kmeans" : "rpcl";
}

std::size_t pool_cluster_upper_bound(std::size_t n_objects) {
  auto root = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_objects)));
  while (root * root > n_objects) --root;
  while ((root + 1) * (root + 1) <= n_objects) ++root;
  return std::min<std::size_t>(root / 2, 50);
}

ClusteringPool build_pool(const FeatureDataset& data, std::size_t pool_size, std::uint64_t seed,
                          std::size_t threads) {
  const std::size_t n = data.n_objects();
  require(pool_size >= 2 && pool_size % 2 == 0, ErrorCode::kUsage,
          "pool size must be a positive even number");
  const std::size_t ub = pool_cluster_upper_bound(n);
  require(ub >= 2, ErrorCode::kInvalidInput,
          "dataset too small for pool generation: need N >= 16, got N=" + std::to_string(n));

  ClusteringPool pool;
  pool.n_objects = n;
  pool.labelings.resize(pool_size);
  pool.members.resize(pool_size);

  auto run_member = [&](std::size_t idx) {
    const std::uint64_t member_seed = derive_seed(seed, idx);
    std::mt19937_64 rng(member_seed);
    const std::size_t clusters = std::uniform_int_distribution<std::size_t>(2, ub)(rng);
    const std::uint64_t algo_seed = derive_seed(member_seed, 0);
    PoolMember meta{idx < pool_size / 2 ? PoolAlgorithm::kKMeans : PoolAlgorithm::kRpcl, clusters, 0,
                    member_seed};
    std::vector<Label> labels;
    if (meta.algorithm == PoolAlgorithm::kKMeans) {
      labels = kmeans(data.features, clusters, algo_seed).labels;
    } else {
      labels = rpcl(data.features, clusters, algo_seed).labels;
    }
    meta.found_clusters = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end()) + 1);
    pool.labelings[idx] = std::move(labels);
    pool.members[idx] = meta;
  };

  threads = std::clamp<std::size_t>(threads, 1, pool_size);
  if (threads == 1) {
    for (std::size_t i = 0; i < pool_size; ++i) run_member(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> workers;
      for (std::size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&] {
          try {
            for (std::size_t i = next++; i < pool_size; i = next++) run_member(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = pool_size;
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return pool;
}

std::vector<std::size_t> draw_members(const ClusteringPool& pool, std::size_t size,
                                      std::uint64_t seed) {
  require(size >= 1, ErrorCode::kUsage, "ensemble size M must be at least 1");
  require(size <= pool.size(), ErrorCode::kUsage,
          "ensemble size M=" + std::to_string(size) + " exceeds pool size " +
              std::to_string(pool.size()));
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(size);
  return idx;
}

Ensemble make_ensemble(const ClusteringPool& pool, const std::vector<std::size_t>& members) {
  const std::size_t n = pool.n_objects;
  const std::size_t m = members.size();
  std::vector<std::int64_t> labels(n * m);
  for (std::size_t c = 0; c < m; ++c) {
    require(members[c] < pool.size(), ErrorCode::kInvalidInput, "pool member index out of range");
    const auto& l = pool.labelings[members[c]];
    for (std::size_t i = 0; i < n; ++i) labels[i * m + c] = l[i];
  }
  return Ensemble::from_labels(n, m, labels);
}

}  // namespace trajclust
