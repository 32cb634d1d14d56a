#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajclust/ensemble.hpp"

namespace trajclust {

enum class GraphKind { kMsg, kKeng, kGlobalThreshold };

const char* to_string(GraphKind kind);

struct Edge {
  std::int32_t u;
  std::int32_t v;
  double weight;
};

struct Neighbor {
  std::int32_t node;
  double weight;
};

// Undirected weighted graph over microclusters. Each link is stored once in
// `edges()` (u < v, sorted) plus a symmetric CSR view for traversal. Links
// never carry zero weight and never join a node to itself.
class SparseSimGraph {
 public:
  SparseSimGraph() = default;

  static SparseSimGraph from_edges(std::size_t n_nodes, std::vector<std::size_t> node_sizes,
                                   GraphKind kind, std::vector<Edge> edges);

  std::size_t n_nodes() const { return node_sizes_.size(); }
  std::size_t n_links() const { return edges_.size(); }
  GraphKind kind() const { return kind_; }
  const std::vector<std::size_t>& node_sizes() const { return node_sizes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Neighbor> neighbors(std::size_t node) const {
    return {adjacency_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
  }
  std::size_t degree(std::size_t node) const { return offsets_[node + 1] - offsets_[node]; }

  // Weight of link (i, j), or nullopt when absent.
  std::optional<double> weight(std::size_t i, std::size_t j) const;

 private:
  std::vector<std::size_t> node_sizes_;
  GraphKind kind_ = GraphKind::kMsg;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
};

// Thres_K per node; nullopt marks an isolated node.
class EliteThresholds {
 public:
  explicit EliteThresholds(std::vector<std::optional<double>> values)
      : values_(std::move(values)) {}

  std::optional<double> operator[](std::size_t node) const { return values_[node]; }
  bool isolated(std::size_t node) const { return !values_[node].has_value(); }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<std::optional<double>> values_;
};

// MSG: link (i, j) with weight a~_ij for every nonzero off-diagonal entry.
SparseSimGraph build_msg(const CoAssocMatrix& mca, const MicroclusterSet& microclusters);

// K-th largest incident weight per node, ties counted with multiplicity.
// Nodes with degree below K fall back to their smallest incident weight.
EliteThresholds elite_thresholds(const SparseSimGraph& msg, std::size_t k);

// Keeps a link iff its weight reaches the elite threshold of either endpoint.
SparseSimGraph build_keng(const SparseSimGraph& msg, std::size_t k);

// Fraction of MSG links that survive into the K-ENG.
double ratio_pl(const SparseSimGraph& msg, const SparseSimGraph& keng);

// Comparator only: drops every link lighter than a single global threshold.
SparseSimGraph build_global_threshold_graph(const SparseSimGraph& msg, double threshold);

// Text edge list: header "n_nodes <N> kind <MSG|KENG>" then one "i j w" line
// per link (i < j). Node sizes are not part of the format.
void write_edge_list(std::ostream& out, const SparseSimGraph& graph);
void write_edge_list(const std::string& path, const SparseSimGraph& graph);
SparseSimGraph read_edge_list(std::istream& in);

}  // namespace trajclust
