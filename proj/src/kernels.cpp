#include "elmstream/kernels.hpp"

#include <algorithm>
#include <vector>

namespace elmstream::kernels {

namespace {

long block_count(long rows) { return (rows + kBlockRows - 1) / kBlockRows; }

void check_rows(const Matrix& m) {
  if (m.rows() < 1) {
    throw ShapeError("at least one row is required");
  }
}

/// Sums per-block partial products in block-index order so the result does
/// not depend on how blocks were scheduled across threads.
template <typename BlockOp>
Matrix blocked_sum(long rows, long out_rows, long out_cols, bool parallel,
                   BlockOp&& op) {
  const long nb = block_count(rows);
  std::vector<Matrix> partial(static_cast<size_t>(nb));
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long b = 0; b < nb; ++b) {
      partial[static_cast<size_t>(b)] = op(b);
    }
  } else {
    for (long b = 0; b < nb; ++b) {
      partial[static_cast<size_t>(b)] = op(b);
    }
  }
  Matrix out = Matrix::Zero(out_rows, out_cols);
  for (long b = 0; b < nb; ++b) {
    out += partial[static_cast<size_t>(b)];
  }
  return out;
}

Matrix feature_matrix_impl(const HiddenLayer& layer, const Matrix& inputs,
                           bool parallel) {
  check_rows(inputs);
  if (inputs.cols() != layer.input_dim()) {
    throw ShapeError("input columns do not match layer input dimension");
  }
  const long rows = inputs.rows();
  Matrix h(rows, layer.hidden_dim());
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) {
      h.row(i) = layer.map(inputs.row(i).transpose()).transpose();
    }
  } else {
    for (long i = 0; i < rows; ++i) {
      h.row(i) = layer.map(inputs.row(i).transpose()).transpose();
    }
  }
  return h;
}

Matrix gram_impl(const Matrix& features, bool parallel) {
  check_rows(features);
  const long rows = features.rows();
  const long cols = features.cols();
  return blocked_sum(rows, cols, cols, parallel, [&](long b) {
    const long r0 = b * kBlockRows;
    const long nr = std::min(kBlockRows, rows - r0);
    const Matrix block = features.middleRows(r0, nr);
    return Matrix(block.transpose() * block);
  });
}

Matrix gram_weighted_impl(const Matrix& features, const Vector& weights,
                          bool parallel) {
  check_rows(features);
  if (weights.size() != features.rows()) {
    throw ShapeError("weight count does not match row count");
  }
  const long rows = features.rows();
  const long cols = features.cols();
  return blocked_sum(rows, cols, cols, parallel, [&](long b) {
    const long r0 = b * kBlockRows;
    const long nr = std::min(kBlockRows, rows - r0);
    const Matrix block = features.middleRows(r0, nr);
    const Matrix scaled = weights.segment(r0, nr).asDiagonal() * block;
    return Matrix(block.transpose() * scaled);
  });
}

Matrix cross_impl(const Matrix& features, const Matrix& targets,
                  bool parallel) {
  check_rows(features);
  if (targets.rows() != features.rows()) {
    throw ShapeError("feature and target row counts differ");
  }
  const long rows = features.rows();
  return blocked_sum(rows, features.cols(), targets.cols(), parallel,
                     [&](long b) {
                       const long r0 = b * kBlockRows;
                       const long nr = std::min(kBlockRows, rows - r0);
                       return Matrix(features.middleRows(r0, nr).transpose() *
                                     targets.middleRows(r0, nr));
                     });
}

Matrix cross_weighted_impl(const Matrix& features, const Matrix& targets,
                           const Vector& weights, bool parallel) {
  check_rows(features);
  if (targets.rows() != features.rows()) {
    throw ShapeError("feature and target row counts differ");
  }
  if (weights.size() != features.rows()) {
    throw ShapeError("weight count does not match row count");
  }
  const long rows = features.rows();
  return blocked_sum(
      rows, features.cols(), targets.cols(), parallel, [&](long b) {
        const long r0 = b * kBlockRows;
        const long nr = std::min(kBlockRows, rows - r0);
        const Matrix scaled =
            weights.segment(r0, nr).asDiagonal() * targets.middleRows(r0, nr);
        return Matrix(features.middleRows(r0, nr).transpose() * scaled);
      });
}

Matrix predict_all_impl(const ElmModel& model, const Matrix& inputs,
                        bool parallel) {
  check_rows(inputs);
  if (inputs.cols() != model.input_dim()) {
    throw ShapeError("input columns do not match model input dimension");
  }
  const long rows = inputs.rows();
  Matrix out(rows, model.output_dim());
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) {
      out.row(i) = model.predict(inputs.row(i).transpose()).transpose();
    }
  } else {
    for (long i = 0; i < rows; ++i) {
      out.row(i) = model.predict(inputs.row(i).transpose()).transpose();
    }
  }
  return out;
}

}  // namespace

Matrix feature_matrix(const HiddenLayer& layer, const Matrix& inputs) {
  return feature_matrix_impl(layer, inputs, true);
}

Matrix feature_matrix_serial(const HiddenLayer& layer, const Matrix& inputs) {
  return feature_matrix_impl(layer, inputs, false);
}

Matrix gram(const Matrix& features) { return gram_impl(features, true); }

Matrix gram_serial(const Matrix& features) {
  return gram_impl(features, false);
}

Matrix gram_weighted(const Matrix& features, const Vector& weights) {
  return gram_weighted_impl(features, weights, true);
}

Matrix gram_weighted_serial(const Matrix& features, const Vector& weights) {
  return gram_weighted_impl(features, weights, false);
}

Matrix cross(const Matrix& features, const Matrix& targets) {
  return cross_impl(features, targets, true);
}

Matrix cross_serial(const Matrix& features, const Matrix& targets) {
  return cross_impl(features, targets, false);
}

Matrix cross_weighted(const Matrix& features, const Matrix& targets,
                      const Vector& weights) {
  return cross_weighted_impl(features, targets, weights, true);
}

Matrix cross_weighted_serial(const Matrix& features, const Matrix& targets,
                             const Vector& weights) {
  return cross_weighted_impl(features, targets, weights, false);
}

Matrix predict_all(const ElmModel& model, const Matrix& inputs) {
  return predict_all_impl(model, inputs, true);
}

Matrix predict_all_serial(const ElmModel& model, const Matrix& inputs) {
  return predict_all_impl(model, inputs, false);
}

}  // namespace elmstream::kernels
