#include "trajclust/ensemble.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

#include "trajclust/error.hpp"
#include "trajclust/similarity.hpp"

namespace trajclust {

namespace {

template <typename T>
std::vector<Label> canonicalize_impl(std::span<const T> labels) {
  std::unordered_map<T, Label> ids;
  std::vector<Label> out;
  out.reserve(labels.size());
  for (const T& l : labels) {
    auto [it, inserted] = ids.try_emplace(l, static_cast<Label>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

std::vector<Label> canonicalize(std::span<const Label> labels) {
  return canonicalize_impl(labels);
}

std::vector<Label> canonicalize(std::span<const std::int64_t> labels) {
  return canonicalize_impl(labels);
}

Ensemble Ensemble::from_labels(std::size_t n_objects, std::size_t n_clusterings,
                               std::span<const std::int64_t> labels) {
  require(n_objects >= 1, ErrorCode::kInvalidInput, "ensemble needs at least one object");
  require(n_clusterings >= 1, ErrorCode::kInvalidInput,
          "ensemble needs at least one base clustering");
  require(labels.size() == n_objects * n_clusterings, ErrorCode::kInvalidInput,
          "label matrix has " + std::to_string(labels.size()) + " entries, expected " +
              std::to_string(n_objects * n_clusterings));

  Ensemble e;
  e.n_objects_ = n_objects;
  e.n_clusterings_ = n_clusterings;
  e.labels_.resize(labels.size());
  e.original_.resize(n_clusterings);
  e.clusters_per_base_.resize(n_clusterings);
  e.cluster_offsets_.resize(n_clusterings);

  for (std::size_t m = 0; m < n_clusterings; ++m) {
    std::unordered_map<std::int64_t, Label> ids;
    auto& original = e.original_[m];
    for (std::size_t i = 0; i < n_objects; ++i) {
      const std::int64_t raw = labels[i * n_clusterings + m];
      if (raw < 0) {
        throw_error(ErrorCode::kInvalidInput,
                    "missing or negative label at object " + std::to_string(i) +
                        ", clustering " + std::to_string(m));
      }
      auto [it, inserted] = ids.try_emplace(raw, static_cast<Label>(original.size()));
      if (inserted) original.push_back(raw);
      e.labels_[i * n_clusterings + m] = it->second;
    }
    e.clusters_per_base_[m] = original.size();
    e.cluster_offsets_[m] = e.total_clusters_;
    e.total_clusters_ += original.size();
  }
  return e;
}

std::vector<Label> Ensemble::column(std::size_t clustering) const {
  std::vector<Label> out(n_objects_);
  for (std::size_t i = 0; i < n_objects_; ++i) out[i] = label(i, clustering);
  return out;
}

std::uint64_t Ensemble::content_hash() const {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(n_objects_);
  mix(n_clusterings_);
  for (Label l : labels_) mix(static_cast<std::uint64_t>(l));
  return h;
}

MicroclusterSet::MicroclusterSet(std::vector<Label> assignment, std::vector<std::size_t> sizes,
                                 std::vector<Label> signatures, std::size_t n_clusterings)
    : assignment_(std::move(assignment)),
      sizes_(std::move(sizes)),
      signatures_(std::move(signatures)),
      n_clusterings_(n_clusterings) {
  member_offsets_.assign(sizes_.size() + 1, 0);
  for (std::size_t c = 0; c < sizes_.size(); ++c)
    member_offsets_[c + 1] = member_offsets_[c] + sizes_[c];
  member_list_.resize(assignment_.size());
  std::vector<std::size_t> cursor(member_offsets_.begin(), member_offsets_.end() - 1);
  for (std::size_t i = 0; i < assignment_.size(); ++i)
    member_list_[cursor[static_cast<std::size_t>(assignment_[i])]++] = i;
}

std::vector<Label> MicroclusterSet::expand(std::span<const Label> microcluster_labels) const {
  require(microcluster_labels.size() == size(), ErrorCode::kInternal,
          "microcluster labeling has the wrong length");
  std::vector<Label> out(assignment_.size());
  for (std::size_t i = 0; i < assignment_.size(); ++i)
    out[i] = microcluster_labels[static_cast<std::size_t>(assignment_[i])];
  return out;
}

MicroclusterSet build_microclusters(const Ensemble& ensemble) {
  const std::size_t n = ensemble.n_objects();
  const std::size_t m = ensemble.n_clusterings();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Stable sort keeps the smallest object index first within each group.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = ensemble.row(a);
    const auto rb = ensemble.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });

  // Group id per object in sorted-signature order.
  std::vector<std::size_t> group_of(n);
  std::vector<std::size_t> group_first;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t obj = order[pos];
    if (pos == 0 || !std::ranges::equal(ensemble.row(order[pos - 1]), ensemble.row(obj)))
      group_first.push_back(obj);
    group_of[obj] = group_first.size() - 1;
  }

  // Renumber groups by first appearance in object order.
  const std::size_t n_groups = group_first.size();
  std::vector<Label> renumber(n_groups, -1);
  std::vector<Label> assignment(n);
  std::vector<std::size_t> sizes;
  std::vector<Label> signatures;
  signatures.reserve(n_groups * m);
  for (std::size_t i = 0; i < n; ++i) {
    Label& id = renumber[group_of[i]];
    if (id < 0) {
      id = static_cast<Label>(sizes.size());
      sizes.push_back(0);
      const auto r = ensemble.row(i);
      signatures.insert(signatures.end(), r.begin(), r.end());
    }
    assignment[i] = id;
    ++sizes[static_cast<std::size_t>(id)];
  }
  return MicroclusterSet(std::move(assignment), std::move(sizes), std::move(signatures), m);
}

CoAssocMatrix::CoAssocMatrix(std::size_t size, std::size_t n_clusterings, Granularity granularity)
    : size_(size),
      n_clusterings_(n_clusterings),
      granularity_(granularity),
      counts_(size * size, 0) {}

SimilarityMatrix CoAssocMatrix::to_similarity() const {
  SimilarityMatrix s(size_);
  for (std::size_t i = 0; i < size_; ++i)
    for (std::size_t j = 0; j < size_; ++j) s(i, j) = value(i, j);
  return s;
}

namespace {

// Adds one to every pair that shares a cluster, using per-cluster member
// buckets instead of an all-pairs comparison.
template <typename LabelOf>
void accumulate_pairs(CoAssocMatrix& out, std::size_t items, std::size_t clusterings,
                      const std::vector<std::size_t>& clusters_per_base, LabelOf label_of,
                      std::uint32_t& (*cell)(CoAssocMatrix&, std::size_t, std::size_t)) {
  for (std::size_t m = 0; m < clusterings; ++m) {
    std::vector<std::vector<std::size_t>> buckets(clusters_per_base[m]);
    for (std::size_t i = 0; i < items; ++i)
      buckets[static_cast<std::size_t>(label_of(i, m))].push_back(i);
    for (const auto& bucket : buckets) {
      for (std::size_t a = 0; a < bucket.size(); ++a) {
        ++cell(out, bucket[a], bucket[a]);
        for (std::size_t b = a + 1; b < bucket.size(); ++b) {
          ++cell(out, bucket[a], bucket[b]);
          ++cell(out, bucket[b], bucket[a]);
        }
      }
    }
  }
}

}  // namespace

CoAssocMatrix compute_mca(const Ensemble& ensemble, const MicroclusterSet& microclusters) {
  require(microclusters.n_objects() == ensemble.n_objects() &&
              microclusters.n_clusterings() == ensemble.n_clusterings(),
          ErrorCode::kInvalidInput, "microclusters do not belong to this ensemble");
  CoAssocMatrix out(microclusters.size(), ensemble.n_clusterings(), Granularity::kMicrocluster);
  accumulate_pairs(
      out, microclusters.size(), ensemble.n_clusterings(), ensemble.clusters_per_base(),
      [&](std::size_t i, std::size_t m) { return microclusters.signature(i, m); },
      [](CoAssocMatrix& c, std::size_t i, std::size_t j) -> std::uint32_t& { return c.at(i, j); });
  return out;
}

CoAssocMatrix compute_ca(const Ensemble& ensemble, std::size_t max_objects) {
  require(ensemble.n_objects() <= max_objects, ErrorCode::kInvalidInput,
          "object-level co-association refused: N=" + std::to_string(ensemble.n_objects()) +
              " exceeds cap " + std::to_string(max_objects));
  CoAssocMatrix out(ensemble.n_objects(), ensemble.n_clusterings(), Granularity::kObject);
  accumulate_pairs(
      out, ensemble.n_objects(), ensemble.n_clusterings(), ensemble.clusters_per_base(),
      [&](std::size_t i, std::size_t m) { return ensemble.label(i, m); },
      [](CoAssocMatrix& c, std::size_t i, std::size_t j) -> std::uint32_t& { return c.at(i, j); });
  return out;
}

}  // namespace trajclust
