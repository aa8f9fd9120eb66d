#pragma once

#include <cstdint>
#include <vector>

#include "elmstream/hidden_layer.hpp"
#include "elmstream/narx.hpp"
#include "elmstream/types.hpp"

namespace elmstream {

struct AprbsChannel {
  double lo = 0.0;
  double hi = 1.0;
};

struct AprbsConfig {
  std::vector<AprbsChannel> channels;
  int hold_min = 1;
  int hold_max = 1;
  long length = 0;
  std::uint64_t seed = 0;
};

/// Piecewise-constant excitation: per channel, levels drawn uniformly from
/// [lo, hi] and hold durations uniformly from {hold_min..hold_max}; the
/// last hold truncates at the series end. Channels use independent streams
/// derived from the seed.
Matrix generate_aprbs(const AprbsConfig& config);

struct PlantConfig {
  double a1 = 0.6;
  double a2 = 0.5;
  double b1 = 0.9;
  double b2 = 0.8;
  double c1 = 3.0;
  double c2 = 2.0;
  double theta_mis = -0.2;
  double theta_var = 0.35;
  double sigma_noise = 0.01;
};

/// Width of the trailing window used for the high-variability label.
inline constexpr int kVariabilityWindow = 5;

struct LabeledSeries {
  Matrix u_series;              // T x 3
  Matrix y_series;              // T x 2
  std::vector<int> labels;      // +1 stable, -1 unstable, per cycle

  long length() const { return u_series.rows(); }
};

/// Two-state nonlinear plant with a dropout regime:
///   y1(k) = a1*y1(k-1) + b1*tanh(c1*u1(k-1) - c2*u2(k-1)) + s(k-1) + w1(k)
///   y2(k) = a2*y2(k-1) + b2*(u3(k-1) - 0.5) - 0.8*s(k-1) + w2(k)
///   s(k)  = -1.2 when u1(k) < 0.25 and y1(k) < 0.1, else 0
/// starting from y(0) = 0 with i.i.d. Gaussian measurement noise w.
/// Cycle k is labeled -1 when y1(k) < theta_mis or the population standard
/// deviation of y2 over the trailing kVariabilityWindow cycles exceeds
/// theta_var.
LabeledSeries simulate_plant(const PlantConfig& config, const Matrix& u_series,
                             std::uint64_t noise_seed);

/// Noise-free stream (x_i, W_star^T phi(x_i)) with x_i i.i.d. uniform on
/// [input_lo, input_hi]^n; realizable by construction for Lyapunov tests.
SampleStream teacher_stream(const HiddenLayer& layer, const Matrix& w_star,
                            double input_lo, double input_hi, long length,
                            std::uint64_t seed);

}  // namespace elmstream
