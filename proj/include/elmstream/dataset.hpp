#pragma once

#include <vector>

#include "elmstream/types.hpp"

namespace elmstream {

/// Supervised training set: one input row per target row, optional +/-1
/// class labels for imbalance-weighted training.
struct Dataset {
  Matrix inputs;            // N x n
  Matrix targets;           // N x y_d
  std::vector<int> labels;  // empty, or size N with values in {+1, -1}

  Dataset() = default;
  Dataset(Matrix in, Matrix tg, std::vector<int> lb = {});

  long rows() const { return inputs.rows(); }
  bool has_labels() const { return !labels.empty(); }
};

/// Per-sample weights for imbalance-aware training: majority rows weigh 1,
/// minority rows weigh imbalance_ratio * scale_factor.
struct WeightSpec {
  double imbalance_ratio = 1.0;  // majority-to-minority count ratio
  double scale_factor = 1.0;     // application-tuned multiplier

  double minority_weight() const { return imbalance_ratio * scale_factor; }
};

}  // namespace elmstream
