#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace trajclust {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense symmetric pairwise similarity over microclusters. Holds PTS, or the
// MCA values when running the EAC baseline.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(std::size_t size) : values_(RowMatrix::Zero(size, size)) {}
  explicit SimilarityMatrix(RowMatrix values);

  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  double& operator()(std::size_t i, std::size_t j) {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  const RowMatrix& values() const { return values_; }
  RowMatrix& values() { return values_; }

  std::size_t storage_bytes() const { return sizeof(double) * size() * size(); }

 private:
  RowMatrix values_;
};

}  // namespace trajclust
