#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "elmstream/dataset.hpp"
#include "elmstream/elm_model.hpp"
#include "elmstream/types.hpp"

namespace elmstream {

struct NarxConfig {
  int input_lags = 1;   // n_u
  int output_lags = 1;  // n_y
  int input_dim = 1;    // channels of u
  int output_dim = 1;   // channels of y

  int regressor_dim() const { return input_dim * input_lags + output_dim * output_lags; }
  int warmup() const { return std::max(input_lags, output_lags); }
  void validate() const;
};

/// Lagged samples in cycle order. Row i of inputs is the regressor whose
/// target is row i of targets, measured at cycle cycles[i].
struct SampleStream {
  Matrix inputs;
  Matrix targets;
  std::vector<int> labels;  // empty when the source carried no labels
  std::vector<long> cycles;

  long size() const { return inputs.rows(); }
  Dataset dataset() const { return Dataset(inputs, targets, labels); }
};

/// Regressor for target cycle k: input lags newest first, then output lags
/// newest first, built only from cycles strictly before k.
SampleStream build_regressors(const Matrix& u_series, const Matrix& y_series,
                              const NarxConfig& config);
SampleStream build_regressors(const Matrix& u_series, const Matrix& y_series,
                              const std::vector<int>& labels,
                              const NarxConfig& config);

using Predictor = std::function<Vector(const Vector&)>;

/// One-step-ahead prediction from measured histories. Histories are in
/// ascending cycle order; the trailing rows supply the lags.
Vector osap_predict(const Predictor& predictor, const Matrix& u_history,
                    const Matrix& y_history, const NarxConfig& config);
Vector osap_predict(const ElmModel& model, const Matrix& u_history,
                    const Matrix& y_history, const NarxConfig& config);

/// Recurrent multi-step-ahead prediction: measured outputs seed the first
/// regressor, predictions are fed back afterwards. u_sequence must cover
/// horizon + n_u - 1 cycles (ascending); its last row is the input one cycle
/// before the final predicted cycle.
Matrix msap_predict(const Predictor& predictor, const Matrix& u_sequence,
                    const Matrix& y_seed_history, long horizon,
                    const NarxConfig& config);
Matrix msap_predict(const ElmModel& model, const Matrix& u_sequence,
                    const Matrix& y_seed_history, long horizon,
                    const NarxConfig& config);

}  // namespace elmstream
