#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "trajclust/consensus.hpp"
#include "trajclust/error.hpp"
#include "trajclust/generators.hpp"

namespace trajclust {

namespace {

struct Segmentation {
  std::vector<Label> labels;  // per row of the sub-problem
  std::vector<double> eigenvalues;
  std::size_t dropped = 0;
};

// Transfer cut on a connected bipartite block B (rows x cols).
Segmentation transfer_cut(const RowMatrix& b, std::size_t k, const PtgpOptions& options,
                          std::uint64_t seed) {
  const Eigen::Index rows = b.rows();
  const Eigen::Index cols = b.cols();
  Segmentation seg;
  if (k <= 1) {
    seg.labels.assign(static_cast<std::size_t>(rows), 0);
    return seg;
  }

  const Eigen::VectorXd row_deg = b.rowwise().sum();
  const Eigen::VectorXd col_deg = b.colwise().sum().transpose();
  require((row_deg.array() > 0.0).all() && (col_deg.array() > 0.0).all(), ErrorCode::kNumeric,
          "bipartite graph has a node without links");

  // Cluster-side affinity W_c = B^T D_r^-1 B and its Laplacian.
  const Eigen::MatrixXd scaled = row_deg.cwiseInverse().asDiagonal() * b;
  Eigen::MatrixXd wc = b.transpose() * scaled;
  wc = 0.5 * (wc + wc.transpose());
  Eigen::MatrixXd lap = -wc;
  lap.diagonal() += col_deg;
  const Eigen::MatrixXd dc = col_deg.asDiagonal();

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, dc);
  require(solver.info() == Eigen::Success, ErrorCode::kNumeric,
          "generalized eigenproblem did not converge");

  const auto want = std::min<Eigen::Index>(static_cast<Eigen::Index>(k), cols);
  std::vector<Eigen::Index> used;
  for (Eigen::Index e = 0; e < want; ++e) {
    const double lambda = solver.eigenvalues()(e);
    if (1.0 - lambda <= options.degenerate_tolerance) {
      ++seg.dropped;
      continue;
    }
    used.push_back(e);
  }

  RowMatrix embedding(rows, static_cast<Eigen::Index>(std::max<std::size_t>(used.size(), 1)));
  if (used.empty()) {
    embedding.setOnes();
  } else {
    for (std::size_t c = 0; c < used.size(); ++c) {
      const double lambda = std::clamp(solver.eigenvalues()(used[c]), 0.0, 1.0);
      seg.eigenvalues.push_back(lambda);
      // lambda = gamma (2 - gamma) relates the cluster-side eigenvalue to the
      // full bipartite one; the row side is u = D_r^-1 B v / (1 - gamma).
      const Eigen::VectorXd v = solver.eigenvectors().col(used[c]);
      embedding.col(static_cast<Eigen::Index>(c)) = (scaled * v) / std::sqrt(1.0 - lambda);
    }
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double norm = embedding.row(r).norm();
    if (norm > 0.0) embedding.row(r) /= norm;
  }

  KMeansOptions km;
  km.restarts = options.kmeans_restarts;
  km.max_iterations = options.kmeans_max_iterations;
  seg.labels = kmeans(embedding, std::min<std::size_t>(k, static_cast<std::size_t>(rows)), seed, km).labels;
  return seg;
}

// Connected components of the bipartite graph (links where weight > 0),
// reported as row lists.
std::vector<std::vector<std::size_t>> bipartite_components(const RowMatrix& b) {
  const auto rows = static_cast<std::size_t>(b.rows());
  const auto cols = static_cast<std::size_t>(b.cols());
  std::vector<std::size_t> parent(rows + cols);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) {
        const std::size_t a = find(i), c = find(rows + j);
        if (a != c) parent[std::max(a, c)] = std::min(a, c);
      }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::int64_t> index(rows + cols, -1);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t r = find(i);
    if (index[r] < 0) {
      index[r] = static_cast<std::int64_t>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(index[r])].push_back(i);
  }
  return out;
}

// Split k over components in proportion to their row counts: each gets at
// least one cluster and at most its row count.
std::vector<std::size_t> allocate_clusters(const std::vector<std::vector<std::size_t>>& comps,
                                           std::size_t k, std::size_t total_rows) {
  const std::size_t r = comps.size();
  std::vector<double> share(r);
  std::vector<std::size_t> alloc(r);
  std::size_t sum = 0;
  for (std::size_t c = 0; c < r; ++c) {
    share[c] = static_cast<double>(k) * static_cast<double>(comps[c].size()) /
               static_cast<double>(total_rows);
    alloc[c] = std::clamp<std::size_t>(static_cast<std::size_t>(share[c]), 1, comps[c].size());
    sum += alloc[c];
  }
  while (sum < k) {
    std::size_t pick = r;
    for (std::size_t c = 0; c < r; ++c) {
      if (alloc[c] >= comps[c].size()) continue;
      if (pick == r || share[c] - alloc[c] > share[pick] - alloc[pick]) pick = c;
    }
    if (pick == r) break;
    ++alloc[pick];
    ++sum;
  }
  while (sum > k) {
    std::size_t pick = r;
    for (std::size_t c = 0; c < r; ++c) {
      if (alloc[c] <= 1) continue;
      if (pick == r || share[c] - alloc[c] < share[pick] - alloc[pick]) pick = c;
    }
    if (pick == r) break;
    --alloc[pick];
    --sum;
  }
  return alloc;
}

}  // namespace

ConsensusResult ptgp(const BipartiteGraph& graph, const MicroclusterSet& microclusters, std::size_t k,
                     const PtgpOptions& options) {
  const std::size_t n = graph.n_microclusters();
  require(n == microclusters.size(), ErrorCode::kInvalidInput,
          "bipartite graph does not match the microcluster set");
  require(k >= 2, ErrorCode::kUsage, "PTGP needs k >= 2");
  require(k <= std::min(n, graph.n_clusters()), ErrorCode::kUsage,
          "cluster count k=" + std::to_string(k) + " exceeds min(microclusters, ensemble clusters) = " +
              std::to_string(std::min(n, graph.n_clusters())));

  ConsensusResult result;
  result.method = "PTGP";
  result.k_requested = k;
  EmbeddingInfo info;
  std::vector<Label> labels(n, 0);

  const auto comps = bipartite_components(graph.weights());
  info.components = comps.size();
  if (comps.size() > 1 && comps.size() < k) {
    const auto alloc = allocate_clusters(comps, k, n);
    Label next_label = 0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const auto& rows = comps[c];
      // Columns touched by this component.
      std::vector<Eigen::Index> cols;
      for (Eigen::Index j = 0; j < graph.weights().cols(); ++j)
        for (std::size_t r : rows)
          if (graph.weights()(static_cast<Eigen::Index>(r), j) > 0.0) {
            cols.push_back(j);
            break;
          }
      RowMatrix sub(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t j = 0; j < cols.size(); ++j)
          sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
              graph.weights()(static_cast<Eigen::Index>(rows[r]), cols[j]);
      const std::size_t kc = std::min(alloc[c], cols.size());
      Segmentation seg = transfer_cut(sub, kc, options, derive_seed(options.seed, c));
      info.dropped_directions += seg.dropped;
      info.eigenvalues.insert(info.eigenvalues.end(), seg.eigenvalues.begin(), seg.eigenvalues.end());
      Label top = 0;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        labels[rows[r]] = next_label + seg.labels[r];
        top = std::max(top, seg.labels[r]);
      }
      next_label += top + 1;
    }
    result.warnings.push_back("bipartite graph has " + std::to_string(comps.size()) +
                              " components; clusters allocated proportionally to component size");
  } else {
    Segmentation seg = transfer_cut(graph.weights(), k, options, options.seed);
    labels = std::move(seg.labels);
    info.dropped_directions = seg.dropped;
    info.eigenvalues = std::move(seg.eigenvalues);
  }
  if (info.dropped_directions > 0)
    result.warnings.push_back("dropped " + std::to_string(info.dropped_directions) +
                              " degenerate eigen-direction(s) with eigenvalue 1");

  result.microcluster_labels = canonicalize(std::span<const Label>(labels));
  result.k_found = static_cast<std::size_t>(
      *std::max_element(result.microcluster_labels.begin(), result.microcluster_labels.end()) + 1);
  if (result.k_found < k)
    result.warnings.push_back("found " + std::to_string(result.k_found) + " clusters, fewer than k=" +
                              std::to_string(k));
  result.object_labels = microclusters.expand(result.microcluster_labels);
  result.embedding = std::move(info);
  return result;
}

}  // namespace trajclust
