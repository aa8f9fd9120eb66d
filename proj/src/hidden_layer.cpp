#include "elmstream/hidden_layer.hpp"

#include <stdexcept>

#include "elmstream/rng.hpp"

namespace elmstream {

HiddenLayer::HiddenLayer(int input_dim, int hidden_dim,
                         ActivationKind activation, std::uint64_t seed)
    : input_dim_(input_dim),
      hidden_dim_(hidden_dim),
      activation_(activation),
      seed_(seed) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw std::invalid_argument("hidden layer dimensions must be positive");
  }
  // Fixed draw order: weights row by row, then the bias vector.
  SplitMix64 rng(seed);
  weights_.resize(input_dim, hidden_dim);
  for (int i = 0; i < input_dim; ++i) {
    for (int j = 0; j < hidden_dim; ++j) {
      weights_(i, j) = rng.uniform(-1.0, 1.0);
    }
  }
  bias_.resize(hidden_dim);
  for (int j = 0; j < hidden_dim; ++j) {
    bias_(j) = rng.uniform(-1.0, 1.0);
  }
}

HiddenLayer HiddenLayer::from_parts(ActivationKind activation,
                                    std::uint64_t seed, Matrix weights,
                                    Vector bias) {
  if (weights.rows() < 1 || weights.cols() < 1 ||
      bias.size() != weights.cols()) {
    throw ShapeError("weights and bias dimensions disagree");
  }
  if (!weights.allFinite() || !bias.allFinite()) {
    throw std::invalid_argument("hidden layer parameters must be finite");
  }
  HiddenLayer layer(static_cast<int>(weights.rows()),
                    static_cast<int>(weights.cols()), activation, seed);
  layer.weights_ = std::move(weights);
  layer.bias_ = std::move(bias);
  return layer;
}

Vector HiddenLayer::map(const Vector& x) const {
  if (x.size() != input_dim_) {
    throw ShapeError("hidden_map: input has length " +
                     std::to_string(x.size()) + ", expected " +
                     std::to_string(input_dim_));
  }
  if (!x.allFinite()) {
    throw std::invalid_argument("hidden_map: non-finite input");
  }
  Vector z = weights_.transpose() * x + bias_;
  const ActivationKind kind = activation_;
  return z.unaryExpr([kind](double v) { return activate(kind, v); });
}

}  // namespace elmstream
