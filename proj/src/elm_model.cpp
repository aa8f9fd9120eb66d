#include "elmstream/elm_model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "elmstream/kernels.hpp"

namespace elmstream {

ElmModel::ElmModel(HiddenLayer hidden, Matrix output_weights)
    : ElmModel(std::optional<HiddenLayer>(std::move(hidden)),
               0,  // patched below
               std::move(output_weights)) {
  input_dim_ = hidden_->input_dim();
  if (output_weights_.rows() != hidden_->hidden_dim()) {
    throw ShapeError("output weight rows do not match hidden dimension");
  }
}

ElmModel ElmModel::linear(int input_dim, Matrix output_weights) {
  if (input_dim < 1) {
    throw std::invalid_argument("input_dim must be >= 1");
  }
  if (output_weights.rows() != input_dim) {
    throw ShapeError("output weight rows do not match input dimension");
  }
  return ElmModel(std::nullopt, input_dim, std::move(output_weights));
}

ElmModel::ElmModel(std::optional<HiddenLayer> hidden, int input_dim,
                   Matrix output_weights)
    : hidden_(std::move(hidden)),
      input_dim_(input_dim),
      output_weights_(std::move(output_weights)) {
  if (output_weights_.rows() < 1 || output_weights_.cols() < 1) {
    throw ShapeError("output weights must be non-empty");
  }
}

Vector ElmModel::features(const Vector& x) const {
  if (hidden_) {
    return hidden_->map(x);
  }
  if (x.size() != input_dim_) {
    throw ShapeError("input length does not match model input dimension");
  }
  return x;
}

Vector ElmModel::predict(const Vector& x) const {
  return predict_features(features(x));
}

Vector ElmModel::predict_features(const Vector& phi) const {
  if (phi.size() != output_weights_.rows()) {
    throw ShapeError("feature length does not match output weight rows");
  }
  return output_weights_.transpose() * phi;
}

int ElmModel::predict_class(const Vector& x) const {
  if (output_dim() != 1) {
    throw ShapeError("class prediction requires a scalar output");
  }
  return predict(x)(0) >= 0.0 ? 1 : -1;
}

void ElmModel::set_output_weights(Matrix w) {
  if (w.rows() != output_weights_.rows() ||
      w.cols() != output_weights_.cols()) {
    throw ShapeError("replacement output weights have a different shape");
  }
  output_weights_ = std::move(w);
}

namespace {

Matrix solve_normal(const Matrix& normal, const Matrix& rhs, double ridge) {
  Matrix regularized = normal;
  regularized.diagonal().array() += ridge;
  if (ridge == 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(regularized,
                                              Eigen::EigenvaluesOnly);
    const double max_ev = eig.eigenvalues().maxCoeff();
    const double min_ev = eig.eigenvalues().minCoeff();
    const double cond =
        (min_ev > 0.0) ? max_ev / min_ev : std::numeric_limits<double>::infinity();
    if (!(cond < kMaxNormalCondition)) {
      throw IllConditionedError(
          "normal matrix too ill-conditioned for ridge = 0", cond);
    }
  }
  Eigen::LLT<Matrix> llt(regularized);
  if (llt.info() != Eigen::Success) {
    throw IllConditionedError("normal matrix is not positive definite",
                              std::numeric_limits<double>::infinity());
  }
  return llt.solve(rhs);
}

void check_pair(const Matrix& features, const Matrix& targets) {
  if (features.rows() != targets.rows()) {
    throw ShapeError("feature and target row counts differ");
  }
  if (features.rows() < 1) {
    throw ShapeError("at least one sample is required");
  }
}

}  // namespace

Matrix solve_ridge(const Matrix& features, const Matrix& targets,
                   double ridge) {
  check_pair(features, targets);
  if (ridge < 0.0) {
    throw std::invalid_argument("ridge must be >= 0");
  }
  return solve_normal(kernels::gram(features),
                      kernels::cross(features, targets), ridge);
}

Matrix solve_ridge_weighted(const Matrix& features, const Matrix& targets,
                            const Vector& weights, double ridge) {
  check_pair(features, targets);
  if (weights.size() != features.rows()) {
    throw ShapeError("weight count does not match sample count");
  }
  if ((weights.array() <= 0.0).any()) {
    throw std::invalid_argument("sample weights must be positive");
  }
  if (ridge < 0.0) {
    throw std::invalid_argument("ridge must be >= 0");
  }
  return solve_normal(kernels::gram_weighted(features, weights),
                      kernels::cross_weighted(features, targets, weights),
                      ridge);
}

Vector sample_weights(const std::vector<int>& labels, const WeightSpec& spec) {
  Vector w(static_cast<long>(labels.size()));
  const double minority = spec.minority_weight();
  for (size_t i = 0; i < labels.size(); ++i) {
    w(static_cast<long>(i)) = labels[i] == -1 ? minority : 1.0;
  }
  return w;
}

ElmModel batch_train(const Dataset& data, const HiddenLayer& layer,
                     double ridge) {
  const Matrix h = kernels::feature_matrix(layer, data.inputs);
  return ElmModel(layer, solve_ridge(h, data.targets, ridge));
}

ElmModel batch_train_weighted(const Dataset& data, const HiddenLayer& layer,
                              double ridge, const WeightSpec& spec) {
  if (!data.has_labels()) {
    throw ShapeError("weighted training requires labels");
  }
  const Matrix h = kernels::feature_matrix(layer, data.inputs);
  return ElmModel(layer,
                  solve_ridge_weighted(h, data.targets,
                                       sample_weights(data.labels, spec),
                                       ridge));
}

ElmModel batch_train_linear(const Dataset& data, double ridge) {
  return ElmModel::linear(static_cast<int>(data.inputs.cols()),
                          solve_ridge(data.inputs, data.targets, ridge));
}

ElmModel batch_train_linear_weighted(const Dataset& data, double ridge,
                                     const WeightSpec& spec) {
  if (!data.has_labels()) {
    throw ShapeError("weighted training requires labels");
  }
  return ElmModel::linear(
      static_cast<int>(data.inputs.cols()),
      solve_ridge_weighted(data.inputs, data.targets,
                           sample_weights(data.labels, spec), ridge));
}

}  // namespace elmstream
