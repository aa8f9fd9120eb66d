#pragma once

#include <cstdint>

#include "elmstream/activation.hpp"
#include "elmstream/types.hpp"

namespace elmstream {

/// Frozen random input layer. Weights and biases are drawn uniformly from
/// [-1, 1] at construction and never change; two layers built from the same
/// (dims, activation, seed) are bit-identical.
class HiddenLayer {
 public:
  HiddenLayer(int input_dim, int hidden_dim, ActivationKind activation,
              std::uint64_t seed);

  /// Rebuilds a layer from stored weights (e.g. a model file); the stored
  /// matrices are authoritative, the seed is kept as metadata.
  static HiddenLayer from_parts(ActivationKind activation, std::uint64_t seed,
                                Matrix weights, Vector bias);

  /// Feature map phi(x) = psi(W_r^T x + b_r).
  Vector map(const Vector& x) const;

  int input_dim() const { return input_dim_; }
  int hidden_dim() const { return hidden_dim_; }
  ActivationKind activation() const { return activation_; }
  std::uint64_t seed() const { return seed_; }
  const Matrix& weights() const { return weights_; }  // input_dim x hidden_dim
  const Vector& bias() const { return bias_; }

 private:
  int input_dim_;
  int hidden_dim_;
  ActivationKind activation_;
  std::uint64_t seed_;
  Matrix weights_;
  Vector bias_;
};

}  // namespace elmstream
