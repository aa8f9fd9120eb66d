#include "elmstream/narx.hpp"

#include <stdexcept>

namespace elmstream {

void NarxConfig::validate() const {
  if (input_lags < 1 || output_lags < 1 || input_dim < 1 || output_dim < 1) {
    throw std::invalid_argument("NARX lags and dimensions must be >= 1");
  }
}

namespace {

void check_series(const Matrix& u_series, const Matrix& y_series,
                  const NarxConfig& config) {
  config.validate();
  if (u_series.cols() != config.input_dim) {
    throw ShapeError("input series has wrong channel count");
  }
  if (y_series.cols() != config.output_dim) {
    throw ShapeError("output series has wrong channel count");
  }
  if (u_series.rows() != y_series.rows()) {
    throw ShapeError("input and output series lengths differ");
  }
}

/// Regressor for target cycle k. u_row(t)/y_row(t) address series rows by
/// cycle index.
template <typename URow, typename YRow>
Vector assemble(long k, const NarxConfig& config, URow&& u_row, YRow&& y_row) {
  Vector x(config.regressor_dim());
  long pos = 0;
  for (int lag = 1; lag <= config.input_lags; ++lag) {
    x.segment(pos, config.input_dim) = u_row(k - lag);
    pos += config.input_dim;
  }
  for (int lag = 1; lag <= config.output_lags; ++lag) {
    x.segment(pos, config.output_dim) = y_row(k - lag);
    pos += config.output_dim;
  }
  return x;
}

}  // namespace

SampleStream build_regressors(const Matrix& u_series, const Matrix& y_series,
                              const NarxConfig& config) {
  return build_regressors(u_series, y_series, std::vector<int>{}, config);
}

SampleStream build_regressors(const Matrix& u_series, const Matrix& y_series,
                              const std::vector<int>& labels,
                              const NarxConfig& config) {
  check_series(u_series, y_series, config);
  const long t = u_series.rows();
  const long warmup = config.warmup();
  if (t <= warmup) {
    throw std::invalid_argument("series shorter than the lag window");
  }
  if (!labels.empty() && static_cast<long>(labels.size()) != t) {
    throw ShapeError("label count does not match series length");
  }
  SampleStream stream;
  const long n = t - warmup;
  stream.inputs.resize(n, config.regressor_dim());
  stream.targets.resize(n, config.output_dim);
  stream.cycles.reserve(static_cast<size_t>(n));
  if (!labels.empty()) {
    stream.labels.reserve(static_cast<size_t>(n));
  }
  for (long k = warmup; k < t; ++k) {
    const long i = k - warmup;
    stream.inputs.row(i) =
        assemble(
            k, config,
            [&](long c) { return u_series.row(c).transpose(); },
            [&](long c) { return y_series.row(c).transpose(); })
            .transpose();
    stream.targets.row(i) = y_series.row(k);
    stream.cycles.push_back(k);
    if (!labels.empty()) {
      stream.labels.push_back(labels[static_cast<size_t>(k)]);
    }
  }
  return stream;
}

Vector osap_predict(const Predictor& predictor, const Matrix& u_history,
                    const Matrix& y_history, const NarxConfig& config) {
  config.validate();
  if (u_history.cols() != config.input_dim ||
      y_history.cols() != config.output_dim) {
    throw ShapeError("history channel count does not match configuration");
  }
  if (u_history.rows() < config.input_lags ||
      y_history.rows() < config.output_lags) {
    throw std::invalid_argument("history shorter than the lag window");
  }
  const long ku = u_history.rows();
  const long ky = y_history.rows();
  const Vector x = assemble(
      0, config, [&](long c) { return u_history.row(ku + c).transpose(); },
      [&](long c) { return y_history.row(ky + c).transpose(); });
  return predictor(x);
}

Vector osap_predict(const ElmModel& model, const Matrix& u_history,
                    const Matrix& y_history, const NarxConfig& config) {
  return osap_predict(
      [&model](const Vector& x) { return model.predict(x); }, u_history,
      y_history, config);
}

Matrix msap_predict(const Predictor& predictor, const Matrix& u_sequence,
                    const Matrix& y_seed_history, long horizon,
                    const NarxConfig& config) {
  config.validate();
  if (horizon < 1) {
    throw std::invalid_argument("horizon must be >= 1");
  }
  if (u_sequence.cols() != config.input_dim ||
      y_seed_history.cols() != config.output_dim) {
    throw ShapeError("sequence channel count does not match configuration");
  }
  if (u_sequence.rows() < horizon + config.input_lags - 1) {
    throw std::invalid_argument("input sequence does not cover the horizon");
  }
  if (y_seed_history.rows() < config.output_lags) {
    throw std::invalid_argument("output seed shorter than the lag window");
  }
  // recent outputs, newest last; starts as the measured seed, then holds
  // fed-back predictions
  Matrix recent(config.output_lags, config.output_dim);
  const long ky = y_seed_history.rows();
  for (int lag = 0; lag < config.output_lags; ++lag) {
    recent.row(config.output_lags - 1 - lag) = y_seed_history.row(ky - 1 - lag);
  }
  Matrix out(horizon, config.output_dim);
  for (long s = 0; s < horizon; ++s) {
    const Vector x = assemble(
        0, config,
        [&](long c) {
          // cycle offset c in -n_u..-1 relative to the predicted cycle
          return u_sequence.row(config.input_lags - 1 + s + 1 + c).transpose();
        },
        [&](long c) {
          return recent.row(config.output_lags + c).transpose();
        });
    const Vector y_hat = predictor(x);
    if (y_hat.size() != config.output_dim) {
      throw ShapeError("predictor output has wrong dimension");
    }
    out.row(s) = y_hat.transpose();
    if (config.output_lags > 1) {
      // discard the oldest row without self-aliasing
      const Matrix shifted = recent.bottomRows(config.output_lags - 1);
      recent.topRows(config.output_lags - 1) = shifted;
    }
    recent.row(config.output_lags - 1) = y_hat.transpose();
  }
  return out;
}

Matrix msap_predict(const ElmModel& model, const Matrix& u_sequence,
                    const Matrix& y_seed_history, long horizon,
                    const NarxConfig& config) {
  return msap_predict(
      [&model](const Vector& x) { return model.predict(x); }, u_sequence,
      y_seed_history, horizon, config);
}

}  // namespace elmstream
