#include "trajclust/error.hpp"

namespace trajclust {

void throw_error(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace trajclust
