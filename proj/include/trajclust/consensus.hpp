#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trajclust/ensemble.hpp"
#include "trajclust/similarity.hpp"

namespace trajclust {

enum class Linkage { kAverage, kComplete, kSingle };

// Complete-link region similarity: the sum of cross-region similarities, or
// the classical minimum.
enum class CompleteLinkSemantics { kSum, kMin };

const char* to_string(Linkage linkage);

struct Merge {
  std::int32_t left;   // region ids: leaves 0..n-1, merged regions n, n+1, ...
  std::int32_t right;
  double similarity;
  std::int32_t id;
};

class Dendrogram {
 public:
  Dendrogram(std::size_t n_leaves, std::vector<Merge> merges)
      : n_leaves_(n_leaves), merges_(std::move(merges)) {}

  std::size_t n_leaves() const { return n_leaves_; }
  const std::vector<Merge>& merges() const { return merges_; }

  // Leaf labeling with `regions` regions, numbered by first appearance over
  // the leaves.
  std::vector<Label> cut(std::size_t regions) const;

 private:
  std::size_t n_leaves_;
  std::vector<Merge> merges_;
};

// Greedy agglomeration: repeatedly merges the most similar pair of regions.
// Among equal similarities the pair whose smallest members are
// lexicographically smallest wins.
Dendrogram build_dendrogram(const SimilarityMatrix& similarity, Linkage linkage,
                            CompleteLinkSemantics cl_semantics = CompleteLinkSemantics::kSum);

struct EmbeddingInfo {
  std::vector<double> eigenvalues;  // of the directions used
  std::size_t dropped_directions = 0;
  std::size_t components = 1;
};

struct ConsensusResult {
  std::vector<Label> object_labels;
  std::vector<Label> microcluster_labels;
  std::size_t k_requested = 0;
  std::size_t k_found = 0;
  std::string method;
  std::optional<Dendrogram> dendrogram;
  std::optional<EmbeddingInfo> embedding;
  std::vector<std::string> warnings;
};

ConsensusResult pta(const SimilarityMatrix& pts, const MicroclusterSet& microclusters, std::size_t k,
                    Linkage linkage,
                    CompleteLinkSemantics cl_semantics = CompleteLinkSemantics::kSum);

// Microcluster-cluster bipartite graph: weight(i, j) is the mean PTS between
// y_i and the microclusters of ensemble cluster C_j.
class BipartiteGraph {
 public:
  explicit BipartiteGraph(RowMatrix weights) : weights_(std::move(weights)) {}

  std::size_t n_microclusters() const { return static_cast<std::size_t>(weights_.rows()); }
  std::size_t n_clusters() const { return static_cast<std::size_t>(weights_.cols()); }
  std::size_t n_nodes() const { return n_microclusters() + n_clusters(); }
  const RowMatrix& weights() const { return weights_; }

 private:
  RowMatrix weights_;
};

BipartiteGraph sim_mc(const SimilarityMatrix& pts, const MicroclusterSet& microclusters,
                      const Ensemble& ensemble);

struct PtgpOptions {
  std::uint64_t seed = 20160101;
  std::size_t kmeans_restarts = 10;
  std::size_t kmeans_max_iterations = 100;
  // Directions with 1 - lambda below this are dropped before transfer.
  double degenerate_tolerance = 1e-10;
};

// Transfer cut on the bipartite graph: solve the small cluster-side
// eigenproblem, carry the eigenvectors to the microcluster side, and group
// the row-normalized embedding with k-means.
ConsensusResult ptgp(const BipartiteGraph& graph, const MicroclusterSet& microclusters, std::size_t k,
                     const PtgpOptions& options = {});

// Normalized-cut value of a microcluster partition measured on the full
// bipartite graph, with each cluster node joined to the segment holding most
// of its weight.
double bipartite_ncut(const BipartiteGraph& graph, const std::vector<Label>& microcluster_labels);

}  // namespace trajclust
