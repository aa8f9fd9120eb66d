#include "elmstream/dataset.hpp"

#include <stdexcept>
#include <utility>

namespace elmstream {

Dataset::Dataset(Matrix in, Matrix tg, std::vector<int> lb)
    : inputs(std::move(in)), targets(std::move(tg)), labels(std::move(lb)) {
  if (inputs.rows() < 1) {
    throw std::invalid_argument("dataset must contain at least one row");
  }
  if (inputs.rows() != targets.rows()) {
    throw ShapeError("dataset: " + std::to_string(inputs.rows()) +
                     " input rows vs " + std::to_string(targets.rows()) +
                     " target rows");
  }
  if (!labels.empty()) {
    if (static_cast<long>(labels.size()) != inputs.rows()) {
      throw ShapeError("dataset: label count does not match row count");
    }
    for (int label : labels) {
      if (label != 1 && label != -1) {
        throw std::invalid_argument("dataset labels must be +1 or -1");
      }
    }
  }
}

}  // namespace elmstream
