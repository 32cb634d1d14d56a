#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "trajclust/similarity.hpp"
#include "trajclust/sparse_graph.hpp"

namespace trajclust {

struct Transition {
  std::int32_t to;
  double probability;
};

// Row-stochastic random-walk matrix on the K-ENG, in CSR form. A walker at
// y_i moves to a linked y_j with probability proportional to n_j * w_ij; an
// isolated node keeps all of its mass (p_ii = 1).
class TransitionMatrix {
 public:
  TransitionMatrix(std::vector<std::size_t> offsets, std::vector<Transition> entries,
                   std::vector<std::int32_t> component_of, std::size_t n_components);

  std::size_t size() const { return offsets_.size() - 1; }
  std::span<const Transition> row(std::size_t i) const {
    return {entries_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  double operator()(std::size_t i, std::size_t j) const;

  std::int32_t component_of(std::size_t node) const { return component_of_[node]; }
  std::size_t n_components() const { return n_components_; }
  // Node ids of each connected component, ascending.
  std::vector<std::vector<std::size_t>> components() const;

  RowMatrix to_dense() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Transition> entries_;
  std::vector<std::int32_t> component_of_;
  std::size_t n_components_;
};

TransitionMatrix build_transition(const SparseSimGraph& keng);

// Successive step distributions P^1, P^2, ... restricted to a node subset
// that is closed under transitions (a union of components). Each step is one
// sparse-times-dense product P * P^{t-1}.
class WalkDistributions {
 public:
  // Whole graph.
  explicit WalkDistributions(const TransitionMatrix& transition);
  WalkDistributions(const TransitionMatrix& transition, std::vector<std::size_t> nodes);

  // Advances to the next step and returns it; row r / column c refer to
  // nodes()[r] / nodes()[c].
  const RowMatrix& next();
  std::size_t step() const { return step_; }
  const std::vector<std::size_t>& nodes() const { return nodes_; }

 private:
  const TransitionMatrix* transition_;
  std::vector<std::size_t> nodes_;
  std::vector<std::int32_t> local_;  // global id -> row, -1 outside the subset
  std::size_t step_ = 0;
  RowMatrix current_;
  RowMatrix scratch_;
};

// PTS_ij = cosine between the length-T*N~ probability trajectories of y_i
// and y_j. Computed per connected component by accumulating the Gram matrix
// sum_t P^t (P^t)^T; pairs in different components get 0.
SimilarityMatrix compute_pts(const TransitionMatrix& transition, std::size_t steps);

// floor(sqrt(n)/2), at least 1.
std::size_t default_walk_parameter(std::size_t n_microclusters);

}  // namespace trajclust
