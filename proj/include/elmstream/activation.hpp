#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace elmstream {

/// Bounded scalar activations available for the random hidden layer.
enum class ActivationKind { sigmoid, sine, radial_basis };

inline double activate(ActivationKind kind, double z) {
  switch (kind) {
    case ActivationKind::sigmoid:
      return 1.0 / (1.0 + std::exp(-z));
    case ActivationKind::sine:
      return std::sin(z);
    case ActivationKind::radial_basis:
      return std::exp(-z * z);
  }
  throw std::logic_error("unreachable activation tag");
}

/// Closed interval containing every output of the activation.
inline std::pair<double, double> activation_range(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::sigmoid:
      return {0.0, 1.0};
    case ActivationKind::sine:
      return {-1.0, 1.0};
    case ActivationKind::radial_basis:
      return {0.0, 1.0};
  }
  throw std::logic_error("unreachable activation tag");
}

inline const char* activation_name(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::sigmoid:
      return "sigmoid";
    case ActivationKind::sine:
      return "sine";
    case ActivationKind::radial_basis:
      return "radial-basis";
  }
  throw std::logic_error("unreachable activation tag");
}

inline ActivationKind parse_activation(const std::string& name) {
  if (name == "sigmoid") return ActivationKind::sigmoid;
  if (name == "sine") return ActivationKind::sine;
  if (name == "radial-basis") return ActivationKind::radial_basis;
  throw std::invalid_argument("unknown activation: " + name);
}

}  // namespace elmstream
