#pragma once

#include <optional>

#include "elmstream/dataset.hpp"
#include "elmstream/hidden_layer.hpp"
#include "elmstream/types.hpp"

namespace elmstream {

/// Trained hypothesis: a frozen hidden layer (or the identity feature map
/// for the linear baseline) plus the learned output weights.
class ElmModel {
 public:
  ElmModel(HiddenLayer hidden, Matrix output_weights);

  /// Linear baseline: features are the raw inputs, no hidden layer.
  static ElmModel linear(int input_dim, Matrix output_weights);

  /// phi(x): hidden-layer map, or x itself for the linear baseline.
  Vector features(const Vector& x) const;

  /// W^T phi(x).
  Vector predict(const Vector& x) const;

  /// W^T phi for an already-computed feature vector.
  Vector predict_features(const Vector& phi) const;

  /// Sign of the scalar regression output; sgn(0) = +1. Requires y_d = 1.
  int predict_class(const Vector& x) const;

  int input_dim() const { return input_dim_; }
  int feature_dim() const { return static_cast<int>(output_weights_.rows()); }
  int output_dim() const { return static_cast<int>(output_weights_.cols()); }
  bool is_linear() const { return !hidden_.has_value(); }
  const std::optional<HiddenLayer>& hidden() const { return hidden_; }

  const Matrix& output_weights() const { return output_weights_; }
  Matrix& mutable_output_weights() { return output_weights_; }
  void set_output_weights(Matrix w);

 private:
  ElmModel(std::optional<HiddenLayer> hidden, int input_dim,
           Matrix output_weights);

  std::optional<HiddenLayer> hidden_;
  int input_dim_;
  Matrix output_weights_;  // feature_dim x output_dim
};

/// Ridge solution W = (H^T H + ridge I)^{-1} H^T Y. At ridge = 0 the normal
/// matrix is accepted only below the documented condition threshold.
Matrix solve_ridge(const Matrix& features, const Matrix& targets,
                   double ridge);

/// Weighted ridge solution W = (H^T G H + ridge I)^{-1} H^T G Y with
/// G = diag(weights); weights must be strictly positive.
Matrix solve_ridge_weighted(const Matrix& features, const Matrix& targets,
                            const Vector& weights, double ridge);

ElmModel batch_train(const Dataset& data, const HiddenLayer& layer,
                     double ridge);

ElmModel batch_train_weighted(const Dataset& data, const HiddenLayer& layer,
                              double ridge, const WeightSpec& spec);

/// Linear least-squares baseline on raw inputs.
ElmModel batch_train_linear(const Dataset& data, double ridge);

ElmModel batch_train_linear_weighted(const Dataset& data, double ridge,
                                     const WeightSpec& spec);

/// Per-sample weights per WeightSpec: 1 for label +1, r * f_s for label -1.
Vector sample_weights(const std::vector<int>& labels, const WeightSpec& spec);

/// Condition-number ceiling accepted when solving with ridge = 0.
inline constexpr double kMaxNormalCondition = 1e12;

}  // namespace elmstream
