#include "trajclust/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "trajclust/error.hpp"

namespace trajclust {

TransitionMatrix::TransitionMatrix(std::vector<std::size_t> offsets, std::vector<Transition> entries,
                                   std::vector<std::int32_t> component_of,
                                   std::size_t n_components)
    : offsets_(std::move(offsets)),
      entries_(std::move(entries)),
      component_of_(std::move(component_of)),
      n_components_(n_components) {}

double TransitionMatrix::operator()(std::size_t i, std::size_t j) const {
  for (const Transition& t : row(i))
    if (static_cast<std::size_t>(t.to) == j) return t.probability;
  return 0.0;
}

std::vector<std::vector<std::size_t>> TransitionMatrix::components() const {
  std::vector<std::vector<std::size_t>> out(n_components_);
  for (std::size_t i = 0; i < size(); ++i)
    out[static_cast<std::size_t>(component_of_[i])].push_back(i);
  return out;
}

RowMatrix TransitionMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  RowMatrix d = RowMatrix::Zero(n, n);
  for (std::size_t i = 0; i < size(); ++i)
    for (const Transition& t : row(i)) d(static_cast<Eigen::Index>(i), t.to) = t.probability;
  return d;
}

TransitionMatrix build_transition(const SparseSimGraph& keng) {
  const std::size_t n = keng.n_nodes();
  const auto& sizes = keng.node_sizes();
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<Transition> entries;
  entries.reserve(2 * keng.n_links() + n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto nb = keng.neighbors(i);
    if (nb.empty()) {
      entries.push_back({static_cast<std::int32_t>(i), 1.0});
    } else {
      double total = 0.0;
      for (const Neighbor& v : nb)
        total += static_cast<double>(sizes[static_cast<std::size_t>(v.node)]) * v.weight;
      for (const Neighbor& v : nb)
        entries.push_back(
            {v.node, static_cast<double>(sizes[static_cast<std::size_t>(v.node)]) * v.weight / total});
    }
    offsets[i + 1] = entries.size();
  }

  std::vector<std::int32_t> component(n, -1);
  std::int32_t n_components = 0;
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (component[s] >= 0) continue;
    component[s] = n_components;
    queue.push_back(s);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (const Neighbor& v : keng.neighbors(u)) {
        auto& c = component[static_cast<std::size_t>(v.node)];
        if (c < 0) {
          c = n_components;
          queue.push_back(static_cast<std::size_t>(v.node));
        }
      }
    }
    ++n_components;
  }
  return TransitionMatrix(std::move(offsets), std::move(entries), std::move(component),
                          static_cast<std::size_t>(n_components));
}

WalkDistributions::WalkDistributions(const TransitionMatrix& transition)
    : WalkDistributions(transition, [&] {
        std::vector<std::size_t> all(transition.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return all;
      }()) {}

WalkDistributions::WalkDistributions(const TransitionMatrix& transition,
                                     std::vector<std::size_t> nodes)
    : transition_(&transition), nodes_(std::move(nodes)), local_(transition.size(), -1) {
  for (std::size_t r = 0; r < nodes_.size(); ++r) {
    require(nodes_[r] < transition.size(), ErrorCode::kInvalidInput, "walk node out of range");
    local_[nodes_[r]] = static_cast<std::int32_t>(r);
  }
  for (std::size_t node : nodes_)
    for (const Transition& t : transition.row(node))
      require(local_[static_cast<std::size_t>(t.to)] >= 0, ErrorCode::kInvalidInput,
              "walk node subset is not closed under transitions");
}

const RowMatrix& WalkDistributions::next() {
  const auto c = static_cast<Eigen::Index>(nodes_.size());
  if (step_ == 0) {
    current_ = RowMatrix::Zero(c, c);
    for (Eigen::Index r = 0; r < c; ++r)
      for (const Transition& t : transition_->row(nodes_[static_cast<std::size_t>(r)]))
        current_(r, local_[static_cast<std::size_t>(t.to)]) = t.probability;
  } else {
    scratch_.setZero(c, c);
    for (Eigen::Index r = 0; r < c; ++r) {
      auto out = scratch_.row(r);
      for (const Transition& t : transition_->row(nodes_[static_cast<std::size_t>(r)]))
        out.noalias() += t.probability * current_.row(local_[static_cast<std::size_t>(t.to)]);
    }
    current_.swap(scratch_);
  }
  ++step_;
  return current_;
}

SimilarityMatrix compute_pts(const TransitionMatrix& transition, std::size_t steps) {
  require(steps >= 1, ErrorCode::kUsage, "trajectory length T must be at least 1");
  const std::size_t n = transition.size();
  SimilarityMatrix pts(n);
  RowMatrix gram;

  for (auto& nodes : transition.components()) {
    const std::size_t c = nodes.size();
    if (c == 1) {
      pts(nodes[0], nodes[0]) = 1.0;
      continue;
    }
    gram.setZero(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
    WalkDistributions walk(transition, nodes);
    for (std::size_t t = 0; t < steps; ++t) {
      const RowMatrix& dist = walk.next();
      gram.selfadjointView<Eigen::Lower>().rankUpdate(dist);
    }
    std::vector<double> inv_norm(c);
    for (std::size_t r = 0; r < c; ++r) {
      const double d = gram(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
      require(d > 0.0, ErrorCode::kNumeric, "zero-length probability trajectory");
      inv_norm[r] = 1.0 / std::sqrt(d);
    }
    for (std::size_t r = 0; r < c; ++r) {
      pts(nodes[r], nodes[r]) = 1.0;
      for (std::size_t s = 0; s < r; ++s) {
        const double g = gram(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
        const double v = std::clamp(g * inv_norm[r] * inv_norm[s], 0.0, 1.0);
        pts(nodes[r], nodes[s]) = v;
        pts(nodes[s], nodes[r]) = v;
      }
    }
  }
  return pts;
}

std::size_t default_walk_parameter(std::size_t n_microclusters) {
  // floor(sqrt(n)/2) == floor(isqrt(n)/2)
  auto root = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_microclusters)));
  while (root * root > n_microclusters) --root;
  while ((root + 1) * (root + 1) <= n_microclusters) ++root;
  return std::max<std::size_t>(root / 2, 1);
}

}  // namespace trajclust
