#pragma once

#include <cstdint>
#include <optional>

#include "elmstream/dataset.hpp"
#include "elmstream/elm_model.hpp"
#include "elmstream/types.hpp"

namespace elmstream {

/// Step gain for the gradient learner: either a scalar gamma (meaning
/// gamma * I) or a full symmetric positive-definite matrix.
class StepGain {
 public:
  static StepGain scalar(double gamma);
  static StepGain matrix(Matrix gamma);

  bool is_scalar() const { return !matrix_.has_value(); }
  double scalar_value() const;
  Matrix dense(int dim) const;

  /// Gamma * phi.
  Vector apply(const Vector& phi) const;

  /// phi^T Gamma phi.
  double quadratic(const Vector& phi) const;

  /// Gamma^{-1} * m. Throws std::invalid_argument on a singular gain.
  Matrix solve(const Matrix& m) const;

  double max_eigenvalue() const;

 private:
  StepGain() = default;

  double scalar_ = 0.0;
  std::optional<Matrix> matrix_;
};

enum class StabilityClass { convergent, bounded, violating };

struct StabilityVerdict {
  StabilityClass cls;
  double max_eigenvalue;
};

const char* stability_name(StabilityClass cls);

/// Classifies a step gain by its largest eigenvalue:
/// convergent for 0 < l < 1, bounded for 1 <= l < 2, violating otherwise.
/// Matrix gains asymmetric beyond 1e-9 relative tolerance are rejected.
StabilityVerdict check_stability(const Matrix& step_matrix);
StabilityVerdict check_stability(const StepGain& gain, int dim);

/// tr((W_star - W_est)^T Gamma^{-1} (W_star - W_est)).
double lyapunov_value(const Matrix& w_est, const Matrix& w_star,
                      const StepGain& gain);

/// Recursive least-squares trainer state (model plus covariance M).
class OselmState {
 public:
  /// Batch-initializes on the chunk: W_0 = (H^T H + ridge I)^{-1} H^T Y,
  /// M = (H^T H + ridge I)^{-1}.
  static OselmState init(const Dataset& init_chunk, const HiddenLayer& layer,
                         double ridge);

  /// Rebuilds a state from checkpointed parts.
  static OselmState from_parts(ElmModel model, Matrix covariance,
                               std::uint64_t samples_seen);

  void update(const Vector& x, const Vector& y);
  void update_with_features(const Vector& phi, const Vector& y);

  const ElmModel& model() const { return model_; }
  const Matrix& covariance() const { return covariance_; }
  std::uint64_t samples_seen() const { return samples_seen_; }

 private:
  OselmState(ElmModel model, Matrix covariance, std::uint64_t samples_seen);

  ElmModel model_;
  Matrix covariance_;
  std::uint64_t samples_seen_;
};

/// Stochastic-gradient trainer state. The stability class of the step gain
/// is evaluated once at construction; a violating gain is rejected unless
/// allow_unstable is set.
class SgelmState {
 public:
  SgelmState(ElmModel model, StepGain gain, double scale_factor = 1.0,
             bool allow_unstable = false);

  /// Rebuilds a state from checkpointed parts; skips the stability gate.
  static SgelmState from_parts(ElmModel model, StepGain gain,
                               double scale_factor, std::uint64_t majority,
                               std::uint64_t minority,
                               std::uint64_t samples_seen);

  void update(const Vector& x, const Vector& y);
  void update_with_features(const Vector& phi, const Vector& y);

  /// Majority rows (label +1) take the plain step; minority rows (label -1)
  /// scale it by r * scale_factor with r = majority_count / minority_count.
  /// Counters are incremented with the arriving label before r is read.
  void update_weighted(const Vector& x, const Vector& y, int label);
  void update_weighted_with_features(const Vector& phi, const Vector& y,
                                     int label);

  /// Seeds the running class counters (e.g. from the initialization chunk).
  void set_counts(std::uint64_t majority, std::uint64_t minority);

  const ElmModel& model() const { return model_; }
  const StepGain& gain() const { return gain_; }
  double scale_factor() const { return scale_factor_; }
  const StabilityVerdict& verdict() const { return verdict_; }
  std::uint64_t majority_count() const { return majority_count_; }
  std::uint64_t minority_count() const { return minority_count_; }
  std::uint64_t samples_seen() const { return samples_seen_; }

 private:
  void validate(const Vector& phi, const Vector& y) const;
  void step(const Vector& phi, const Vector& y, double extra_scale);

  ElmModel model_;
  StepGain gain_;
  double scale_factor_;
  StabilityVerdict verdict_;
  std::uint64_t majority_count_ = 0;
  std::uint64_t minority_count_ = 0;
  std::uint64_t samples_seen_ = 0;
};

}  // namespace elmstream
