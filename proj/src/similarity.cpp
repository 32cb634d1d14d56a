#include "trajclust/similarity.hpp"

#include "trajclust/error.hpp"

namespace trajclust {

SimilarityMatrix::SimilarityMatrix(RowMatrix values) : values_(std::move(values)) {
  require(values_.rows() == values_.cols(), ErrorCode::kInvalidInput,
          "similarity matrix must be square");
}

}  // namespace trajclust
