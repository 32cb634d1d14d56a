#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace trajclust {

using Label = std::int32_t;

// M base clusterings over N objects. Labels are canonicalized per column to
// dense 0-based indices in order of first appearance; the raw labels are
// kept for reporting.
class Ensemble {
 public:
  // `labels` is row-major N x M. Negative labels are treated as missing and
  // rejected.
  static Ensemble from_labels(std::size_t n_objects, std::size_t n_clusterings,
                              std::span<const std::int64_t> labels);

  std::size_t n_objects() const { return n_objects_; }
  std::size_t n_clusterings() const { return n_clusterings_; }

  Label label(std::size_t object, std::size_t clustering) const {
    return labels_[object * n_clusterings_ + clustering];
  }
  std::span<const Label> row(std::size_t object) const {
    return {labels_.data() + object * n_clusterings_, n_clusterings_};
  }
  std::span<const Label> canonical_labels() const { return labels_; }

  // n^k for each base clustering.
  const std::vector<std::size_t>& clusters_per_base() const { return clusters_per_base_; }
  // N_c, the number of clusters over the whole ensemble.
  std::size_t total_clusters() const { return total_clusters_; }
  // Column index of cluster (clustering, label) in the flat N_c enumeration.
  std::size_t cluster_index(std::size_t clustering, Label label) const {
    return cluster_offsets_[clustering] + static_cast<std::size_t>(label);
  }

  std::int64_t original_label(std::size_t clustering, Label canonical) const {
    return original_[clustering][static_cast<std::size_t>(canonical)];
  }

  // Column `clustering` as a length-N labeling.
  std::vector<Label> column(std::size_t clustering) const;

  // Stable 64-bit content hash over the canonical labels.
  std::uint64_t content_hash() const;

 private:
  std::size_t n_objects_ = 0;
  std::size_t n_clusterings_ = 0;
  std::vector<Label> labels_;
  std::vector<std::size_t> clusters_per_base_;
  std::vector<std::size_t> cluster_offsets_;
  std::size_t total_clusters_ = 0;
  std::vector<std::vector<std::int64_t>> original_;
};

// Partition of the objects into microclusters: maximal groups of objects that
// share a cluster in every base clustering.
class MicroclusterSet {
 public:
  MicroclusterSet() = default;
  MicroclusterSet(std::vector<Label> assignment, std::vector<std::size_t> sizes,
                  std::vector<Label> signatures, std::size_t n_clusterings);

  std::size_t size() const { return sizes_.size(); }
  std::size_t n_objects() const { return assignment_.size(); }
  std::size_t n_clusterings() const { return n_clusterings_; }

  Label microcluster_of(std::size_t object) const { return assignment_[object]; }
  const std::vector<Label>& assignment() const { return assignment_; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }

  std::span<const Label> signature(std::size_t microcluster) const {
    return {signatures_.data() + microcluster * n_clusterings_, n_clusterings_};
  }
  Label signature(std::size_t microcluster, std::size_t clustering) const {
    return signatures_[microcluster * n_clusterings_ + clustering];
  }

  // Objects of a microcluster, ascending.
  std::span<const std::size_t> members(std::size_t microcluster) const {
    return {member_list_.data() + member_offsets_[microcluster],
            member_offsets_[microcluster + 1] - member_offsets_[microcluster]};
  }

  // Lift a per-microcluster labeling to the objects.
  std::vector<Label> expand(std::span<const Label> microcluster_labels) const;

 private:
  std::vector<Label> assignment_;
  std::vector<std::size_t> sizes_;
  std::vector<Label> signatures_;
  std::size_t n_clusterings_ = 0;
  std::vector<std::size_t> member_offsets_;
  std::vector<std::size_t> member_list_;
};

enum class Granularity { kObject, kMicrocluster };

class SimilarityMatrix;

// Co-association counts b_ij; values are b_ij / M, computed on read so that
// equality checks stay exact.
class CoAssocMatrix {
 public:
  CoAssocMatrix(std::size_t size, std::size_t n_clusterings, Granularity granularity);

  std::size_t size() const { return size_; }
  std::size_t n_clusterings() const { return n_clusterings_; }
  Granularity granularity() const { return granularity_; }

  std::uint32_t count(std::size_t i, std::size_t j) const { return counts_[i * size_ + j]; }
  double value(std::size_t i, std::size_t j) const {
    return static_cast<double>(count(i, j)) / static_cast<double>(n_clusterings_);
  }

  SimilarityMatrix to_similarity() const;

 private:
  friend CoAssocMatrix compute_mca(const Ensemble&, const MicroclusterSet&);
  friend CoAssocMatrix compute_ca(const Ensemble&, std::size_t);

  std::uint32_t& at(std::size_t i, std::size_t j) { return counts_[i * size_ + j]; }

  std::size_t size_;
  std::size_t n_clusterings_;
  Granularity granularity_;
  std::vector<std::uint32_t> counts_;
};

inline constexpr std::size_t kDefaultCoAssocObjectCap = 5000;

// Groups objects by identical label rows. Microcluster ids follow the order
// in which each distinct row first appears.
MicroclusterSet build_microclusters(const Ensemble& ensemble);

CoAssocMatrix compute_mca(const Ensemble& ensemble, const MicroclusterSet& microclusters);

// Object-level matrix, dense N x N. Refuses N above `max_objects`.
CoAssocMatrix compute_ca(const Ensemble& ensemble,
                         std::size_t max_objects = kDefaultCoAssocObjectCap);

// Relabels to dense 0-based ids in order of first appearance.
std::vector<Label> canonicalize(std::span<const Label> labels);
std::vector<Label> canonicalize(std::span<const std::int64_t> labels);

}  // namespace trajclust
