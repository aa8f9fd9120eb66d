#include "elmstream/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "elmstream/rng.hpp"

namespace elmstream {

Matrix generate_aprbs(const AprbsConfig& config) {
  if (config.channels.empty()) {
    throw std::invalid_argument("at least one channel is required");
  }
  if (config.length < 1) {
    throw std::invalid_argument("length must be >= 1");
  }
  if (config.hold_min < 1 || config.hold_max < config.hold_min) {
    throw std::invalid_argument("hold bounds must satisfy 1 <= min <= max");
  }
  for (const AprbsChannel& ch : config.channels) {
    if (!(ch.lo <= ch.hi)) {
      throw std::invalid_argument("channel amplitude bounds must satisfy lo <= hi");
    }
  }
  SplitMix64 seeder(config.seed);
  Matrix u(config.length, static_cast<long>(config.channels.size()));
  for (size_t c = 0; c < config.channels.size(); ++c) {
    SplitMix64 rng(seeder.next());
    const AprbsChannel& ch = config.channels[c];
    long t = 0;
    while (t < config.length) {
      const double level = ch.lo == ch.hi ? ch.lo : rng.uniform(ch.lo, ch.hi);
      const long hold = rng.uniform_int(config.hold_min, config.hold_max);
      for (long i = 0; i < hold && t < config.length; ++i, ++t) {
        u(t, static_cast<long>(c)) = level;
      }
    }
  }
  return u;
}

namespace {

double dropout(double u1, double y1) {
  return (u1 < 0.25 && y1 < 0.1) ? -1.2 : 0.0;
}

/// Population standard deviation of the trailing window ending at index k.
double trailing_std(const Matrix& y_series, long k, int window) {
  const long n = std::min<long>(window, k + 1);
  double mean = 0.0;
  for (long i = k - n + 1; i <= k; ++i) {
    mean += y_series(i, 1);
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (long i = k - n + 1; i <= k; ++i) {
    const double d = y_series(i, 1) - mean;
    var += d * d;
  }
  return std::sqrt(var / static_cast<double>(n));
}

}  // namespace

LabeledSeries simulate_plant(const PlantConfig& config, const Matrix& u_series,
                             std::uint64_t noise_seed) {
  if (u_series.cols() != 3) {
    throw ShapeError("plant input must have 3 channels");
  }
  if (u_series.rows() < 1) {
    throw ShapeError("plant input must have at least one cycle");
  }
  if (!u_series.allFinite()) {
    throw std::invalid_argument("plant input contains non-finite values");
  }
  if (config.sigma_noise < 0.0) {
    throw std::invalid_argument("noise level must be >= 0");
  }
  const long t = u_series.rows();
  LabeledSeries out;
  out.u_series = u_series;
  out.y_series = Matrix::Zero(t, 2);
  out.labels.resize(static_cast<size_t>(t));
  SplitMix64 rng(noise_seed);
  for (long k = 1; k < t; ++k) {
    const double y1p = out.y_series(k - 1, 0);
    const double y2p = out.y_series(k - 1, 1);
    const double s = dropout(u_series(k - 1, 0), y1p);
    const double w1 = config.sigma_noise > 0.0 ? config.sigma_noise * rng.normal() : 0.0;
    const double w2 = config.sigma_noise > 0.0 ? config.sigma_noise * rng.normal() : 0.0;
    out.y_series(k, 0) =
        config.a1 * y1p +
        config.b1 * std::tanh(config.c1 * u_series(k - 1, 0) -
                              config.c2 * u_series(k - 1, 1)) +
        s + w1;
    out.y_series(k, 1) = config.a2 * y2p +
                         config.b2 * (u_series(k - 1, 2) - 0.5) - 0.8 * s + w2;
  }
  for (long k = 0; k < t; ++k) {
    const bool misfire = out.y_series(k, 0) < config.theta_mis;
    const bool variable =
        trailing_std(out.y_series, k, kVariabilityWindow) > config.theta_var;
    out.labels[static_cast<size_t>(k)] = (misfire || variable) ? -1 : 1;
  }
  return out;
}

SampleStream teacher_stream(const HiddenLayer& layer, const Matrix& w_star,
                            double input_lo, double input_hi, long length,
                            std::uint64_t seed) {
  if (w_star.rows() != layer.hidden_dim()) {
    throw ShapeError("teacher weight rows do not match hidden dimension");
  }
  if (length < 1) {
    throw std::invalid_argument("length must be >= 1");
  }
  if (!(input_lo < input_hi)) {
    throw std::invalid_argument("input bounds must satisfy lo < hi");
  }
  SplitMix64 rng(seed);
  SampleStream stream;
  stream.inputs.resize(length, layer.input_dim());
  stream.targets.resize(length, w_star.cols());
  stream.cycles.reserve(static_cast<size_t>(length));
  Vector x(layer.input_dim());
  for (long i = 0; i < length; ++i) {
    for (int d = 0; d < layer.input_dim(); ++d) {
      x(d) = rng.uniform(input_lo, input_hi);
    }
    stream.inputs.row(i) = x.transpose();
    stream.targets.row(i) = (w_star.transpose() * layer.map(x)).transpose();
    stream.cycles.push_back(i);
  }
  return stream;
}

}  // namespace elmstream
