#pragma once

#include "elmstream/elm_model.hpp"
#include "elmstream/hidden_layer.hpp"
#include "elmstream/types.hpp"

namespace elmstream::kernels {

/// Row-block size shared by every blocked reduction below. Fixing it (and
/// merging the per-block products in index order) makes the parallel results
/// bit-identical to the serial references at any thread count.
inline constexpr long kBlockRows = 256;

/// H: row i is the hidden-layer image of input row i.
Matrix feature_matrix(const HiddenLayer& layer, const Matrix& inputs);
Matrix feature_matrix_serial(const HiddenLayer& layer, const Matrix& inputs);

/// H^T H via ordered block sums.
Matrix gram(const Matrix& features);
Matrix gram_serial(const Matrix& features);

/// H^T diag(weights) H.
Matrix gram_weighted(const Matrix& features, const Vector& weights);
Matrix gram_weighted_serial(const Matrix& features, const Vector& weights);

/// H^T Y.
Matrix cross(const Matrix& features, const Matrix& targets);
Matrix cross_serial(const Matrix& features, const Matrix& targets);

/// H^T diag(weights) Y.
Matrix cross_weighted(const Matrix& features, const Matrix& targets,
                      const Vector& weights);
Matrix cross_weighted_serial(const Matrix& features, const Matrix& targets,
                             const Vector& weights);

/// Row i of the result is model.predict(inputs.row(i)).
Matrix predict_all(const ElmModel& model, const Matrix& inputs);
Matrix predict_all_serial(const ElmModel& model, const Matrix& inputs);

}  // namespace elmstream::kernels
