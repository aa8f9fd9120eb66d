#pragma once

#include <cstdint>

#include "elmstream/types.hpp"

namespace elmstream {

/// Per-channel affine map onto [-1, 1] fitted from training-range data.
/// Evaluation data outside the fitted range maps outside [-1, 1]; values
/// are never clipped.
class Normalizer {
 public:
  static Normalizer fit(const Matrix& data);
  static Normalizer from_bounds(Vector min, Vector max);

  long channels() const { return min_.size(); }
  const Vector& min() const { return min_; }
  const Vector& max() const { return max_; }

  Matrix apply(const Matrix& data) const;
  Vector apply_row(const Vector& row) const;
  Matrix invert(const Matrix& data) const;
  Vector invert_row(const Vector& row) const;

 private:
  Normalizer(Vector min, Vector max);

  Vector min_;
  Vector max_;
};

/// sqrt((1/n) * sum_i sum_j (y_norm - yhat_norm)^2): the per-sample error
/// sums over output channels inside the mean.
double normalized_rmse(const Matrix& y_true, const Matrix& y_pred,
                       const Normalizer& normalizer);

/// Streaming form of normalized_rmse over per-cycle rows.
class RmseAccumulator {
 public:
  explicit RmseAccumulator(const Normalizer& normalizer);

  void add(const Vector& y_true, const Vector& y_pred);
  double value() const;
  std::uint64_t count() const { return count_; }

 private:
  Normalizer normalizer_;
  double sum_squares_ = 0.0;
  std::uint64_t count_ = 0;
};

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  /// Labels are +1 (positive / majority) or -1 (negative / minority).
  void add(int true_label, int predicted_label);
  void merge(const ConfusionCounts& other);

  std::uint64_t positives() const { return tp + fn; }
  std::uint64_t negatives() const { return tn + fp; }
  std::uint64_t total() const { return tp + tn + fp + fn; }
};

struct ImbalanceMetrics {
  double tpr;
  double tnr;
  double gm;
  double ta;
};

/// TPR = TP/N+, TNR = TN/N-, GM = sqrt(TPR*TNR), TA = (TPR+TNR)/2.
/// Requires at least one sample of each class.
ImbalanceMetrics imbalance_metrics(const ConfusionCounts& counts);

}  // namespace elmstream
