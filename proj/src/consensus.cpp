#include "trajclust/consensus.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "trajclust/error.hpp"

namespace trajclust {

const char* to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::kAverage:
      return "AL";
    case Linkage::kComplete:
      return "CL";
    case Linkage::kSingle:
      return "SL";
  }
  return "?";
}

std::vector<Label> Dendrogram::cut(std::size_t regions) const {
  require(regions >= 1 && regions <= n_leaves_, ErrorCode::kUsage,
          "cannot cut " + std::to_string(n_leaves_) + " leaves into " + std::to_string(regions) +
              " regions");
  // Union-find over region ids; merged region id points at its parent.
  std::vector<std::int32_t> parent(n_leaves_ + merges_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::int32_t x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  const std::size_t n_merges = n_leaves_ - regions;
  for (std::size_t t = 0; t < n_merges; ++t) {
    const Merge& m = merges_[t];
    parent[static_cast<std::size_t>(find(m.left))] = m.id;
    parent[static_cast<std::size_t>(find(m.right))] = m.id;
  }
  std::vector<Label> roots(n_leaves_);
  for (std::size_t i = 0; i < n_leaves_; ++i) roots[i] = find(static_cast<std::int32_t>(i));
  return canonicalize(std::span<const Label>(roots));
}

namespace {

// Region bookkeeping for agglomeration. Regions live in slots; merging slots
// a < b keeps the result in slot a, so a slot index is always the smallest
// leaf in its region.
class Agglomerator {
 public:
  Agglomerator(const SimilarityMatrix& sim, Linkage linkage, CompleteLinkSemantics cl)
      : n_(sim.size()),
        linkage_(linkage),
        cl_(cl),
        stat_(sim.values()),
        size_(n_, 1),
        active_(n_, true),
        best_(n_, -1),
        best_value_(n_, 0.0) {
    for (std::size_t i = 0; i < n_; ++i) refresh_row(i);
  }

  // Merge statistic -> similarity used for ranking.
  double similarity(std::size_t a, std::size_t b) const {
    const double s = stat_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    if (linkage_ == Linkage::kAverage)
      return s / (static_cast<double>(size_[a]) * static_cast<double>(size_[b]));
    return s;
  }

  std::pair<std::size_t, std::size_t> best_pair() const {
    std::size_t arg = n_;
    double value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      if (!active_[i] || best_[i] < 0) continue;
      if (best_value_[i] > value) {
        value = best_value_[i];
        arg = i;
      }
    }
    return {arg, static_cast<std::size_t>(best_[arg])};
  }

  void merge(std::size_t a, std::size_t b) {
    active_[b] = false;
    best_[b] = -1;
    for (std::size_t c = 0; c < n_; ++c) {
      if (!active_[c] || c == a) continue;
      const double v = combine(stat(a, c), stat(b, c));
      stat(a, c) = v;
      stat(c, a) = v;
    }
    size_[a] += size_[b];
    refresh_row(a);
    for (std::size_t i = 0; i < b; ++i) {
      if (!active_[i] || i == a) continue;
      if (best_[i] == static_cast<std::int64_t>(a) || best_[i] == static_cast<std::int64_t>(b)) {
        refresh_row(i);
      } else if (i < a) {
        const double v = similarity(i, a);
        if (best_[i] < 0 || v > best_value_[i] ||
            (v == best_value_[i] && static_cast<std::int64_t>(a) < best_[i])) {
          best_[i] = static_cast<std::int64_t>(a);
          best_value_[i] = v;
        }
      }
    }
  }

  std::size_t size_of(std::size_t slot) const { return size_[slot]; }

 private:
  double& stat(std::size_t a, std::size_t b) {
    return stat_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  }

  double combine(double x, double y) const {
    switch (linkage_) {
      case Linkage::kAverage:
        return x + y;
      case Linkage::kComplete:
        return cl_ == CompleteLinkSemantics::kSum ? x + y : std::min(x, y);
      case Linkage::kSingle:
        return std::max(x, y);
    }
    return x;
  }

  // Best partner j > i, ties to the smallest j.
  void refresh_row(std::size_t i) {
    best_[i] = -1;
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (!active_[j]) continue;
      const double v = similarity(i, j);
      if (best_[i] < 0 || v > best_value_[i]) {
        best_[i] = static_cast<std::int64_t>(j);
        best_value_[i] = v;
      }
    }
  }

  std::size_t n_;
  Linkage linkage_;
  CompleteLinkSemantics cl_;
  RowMatrix stat_;
  std::vector<std::size_t> size_;
  std::vector<bool> active_;
  std::vector<std::int64_t> best_;
  std::vector<double> best_value_;
};

}  // namespace

Dendrogram build_dendrogram(const SimilarityMatrix& similarity, Linkage linkage,
                            CompleteLinkSemantics cl_semantics) {
  const std::size_t n = similarity.size();
  require(n >= 1, ErrorCode::kInvalidInput, "empty similarity matrix");
  Agglomerator agg(similarity, linkage, cl_semantics);
  std::vector<std::int32_t> region_id(n);
  std::iota(region_id.begin(), region_id.end(), 0);
  std::vector<Merge> merges;
  merges.reserve(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    const auto [a, b] = agg.best_pair();
    const double s = agg.similarity(a, b);
    const auto id = static_cast<std::int32_t>(n + t);
    merges.push_back({region_id[a], region_id[b], s, id});
    agg.merge(a, b);
    region_id[a] = id;
  }
  return Dendrogram(n, std::move(merges));
}

ConsensusResult pta(const SimilarityMatrix& pts, const MicroclusterSet& microclusters, std::size_t k,
                    Linkage linkage, CompleteLinkSemantics cl_semantics) {
  require(pts.size() == microclusters.size(), ErrorCode::kInvalidInput,
          "similarity matrix does not match the microcluster set");
  require(k >= 1, ErrorCode::kUsage, "cluster count k must be at least 1");
  require(k <= microclusters.size(), ErrorCode::kUsage,
          "cluster count k=" + std::to_string(k) + " exceeds the number of microclusters (" +
              std::to_string(microclusters.size()) + ")");
  ConsensusResult result;
  result.dendrogram = build_dendrogram(pts, linkage, cl_semantics);
  result.microcluster_labels = result.dendrogram->cut(k);
  result.object_labels = microclusters.expand(result.microcluster_labels);
  result.k_requested = k;
  result.k_found = k;
  result.method = std::string("PTA-") + to_string(linkage);

  const auto& merges = result.dendrogram->merges();
  const std::size_t used = microclusters.size() - k;
  if (used > 0 && merges[used - 1].similarity <= 0.0)
    result.warnings.push_back(
        "cut at k=" + std::to_string(k) +
        " required merging regions with zero similarity; the split between them is arbitrary");
  return result;
}

BipartiteGraph sim_mc(const SimilarityMatrix& pts, const MicroclusterSet& microclusters,
                      const Ensemble& ensemble) {
  const std::size_t n = microclusters.size();
  require(pts.size() == n, ErrorCode::kInvalidInput,
          "similarity matrix does not match the microcluster set");
  require(microclusters.n_clusterings() == ensemble.n_clusterings(), ErrorCode::kInvalidInput,
          "microclusters do not belong to this ensemble");
  const std::size_t nc = ensemble.total_clusters();
  RowMatrix w = RowMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nc));
  std::vector<std::size_t> members(nc, 0);
  std::vector<std::size_t> column(n);
  for (std::size_t m = 0; m < ensemble.n_clusterings(); ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      column[k] = ensemble.cluster_index(m, microclusters.signature(k, m));
      ++members[column[k]];
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto row = w.row(static_cast<Eigen::Index>(i));
      for (std::size_t k = 0; k < n; ++k) row(static_cast<Eigen::Index>(column[k])) += pts(i, k);
    }
  }
  for (std::size_t j = 0; j < nc; ++j) {
    // Every canonical label occurs, so no cluster is empty.
    require(members[j] > 0, ErrorCode::kInternal, "ensemble cluster without microclusters");
    w.col(static_cast<Eigen::Index>(j)) /= static_cast<double>(members[j]);
  }
  return BipartiteGraph(std::move(w));
}

double bipartite_ncut(const BipartiteGraph& graph, const std::vector<Label>& microcluster_labels) {
  const RowMatrix& b = graph.weights();
  require(microcluster_labels.size() == graph.n_microclusters(), ErrorCode::kInvalidInput,
          "labeling does not match the bipartite graph");
  const auto segments =
      static_cast<std::size_t>(*std::max_element(microcluster_labels.begin(), microcluster_labels.end()) + 1);
  // Attach each cluster node to the segment it is most strongly tied to.
  std::vector<std::size_t> col_segment(graph.n_clusters());
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    std::vector<double> tie(segments, 0.0);
    for (Eigen::Index i = 0; i < b.rows(); ++i) tie[static_cast<std::size_t>(microcluster_labels[static_cast<std::size_t>(i)])] += b(i, j);
    col_segment[static_cast<std::size_t>(j)] =
        static_cast<std::size_t>(std::max_element(tie.begin(), tie.end()) - tie.begin());
  }
  std::vector<double> cut(segments, 0.0), volume(segments, 0.0);
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    const auto si = static_cast<std::size_t>(microcluster_labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      const double w = b(i, j);
      const std::size_t sj = col_segment[static_cast<std::size_t>(j)];
      volume[si] += w;
      volume[sj] += w;
      if (si != sj) {
        cut[si] += w;
        cut[sj] += w;
      }
    }
  }
  double ncut = 0.0;
  for (std::size_t s = 0; s < segments; ++s)
    if (volume[s] > 0.0) ncut += cut[s] / volume[s];
  return ncut;
}

}  // namespace trajclust
