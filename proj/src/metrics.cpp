#include "elmstream/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace elmstream {

Normalizer::Normalizer(Vector min, Vector max)
    : min_(std::move(min)), max_(std::move(max)) {
  if (min_.size() != max_.size() || min_.size() < 1) {
    throw ShapeError("normalizer bounds must be non-empty and equal length");
  }
  for (long c = 0; c < min_.size(); ++c) {
    if (!(max_(c) > min_(c))) {
      throw std::invalid_argument("channel " + std::to_string(c) +
                                  " has max <= min");
    }
  }
}

Normalizer Normalizer::fit(const Matrix& data) {
  if (data.rows() < 2) {
    throw std::invalid_argument("need at least two rows to fit a normalizer");
  }
  if (!data.allFinite()) {
    throw std::invalid_argument("normalizer input contains non-finite values");
  }
  Vector lo = data.colwise().minCoeff().transpose();
  Vector hi = data.colwise().maxCoeff().transpose();
  for (long c = 0; c < lo.size(); ++c) {
    if (!(hi(c) > lo(c))) {
      throw std::invalid_argument("channel " + std::to_string(c) +
                                  " is constant; cannot normalize");
    }
  }
  return Normalizer(std::move(lo), std::move(hi));
}

Normalizer Normalizer::from_bounds(Vector min, Vector max) {
  return Normalizer(std::move(min), std::move(max));
}

Matrix Normalizer::apply(const Matrix& data) const {
  if (data.cols() != channels()) {
    throw ShapeError("column count does not match normalizer channels");
  }
  Matrix out(data.rows(), data.cols());
  for (long c = 0; c < channels(); ++c) {
    out.col(c) =
        2.0 * (data.col(c).array() - min_(c)) / (max_(c) - min_(c)) - 1.0;
  }
  return out;
}

Vector Normalizer::apply_row(const Vector& row) const {
  if (row.size() != channels()) {
    throw ShapeError("row length does not match normalizer channels");
  }
  Vector out(row.size());
  for (long c = 0; c < channels(); ++c) {
    out(c) = 2.0 * (row(c) - min_(c)) / (max_(c) - min_(c)) - 1.0;
  }
  return out;
}

Matrix Normalizer::invert(const Matrix& data) const {
  if (data.cols() != channels()) {
    throw ShapeError("column count does not match normalizer channels");
  }
  Matrix out(data.rows(), data.cols());
  for (long c = 0; c < channels(); ++c) {
    out.col(c) = (data.col(c).array() + 1.0) * 0.5 * (max_(c) - min_(c)) + min_(c);
  }
  return out;
}

Vector Normalizer::invert_row(const Vector& row) const {
  if (row.size() != channels()) {
    throw ShapeError("row length does not match normalizer channels");
  }
  Vector out(row.size());
  for (long c = 0; c < channels(); ++c) {
    out(c) = (row(c) + 1.0) * 0.5 * (max_(c) - min_(c)) + min_(c);
  }
  return out;
}

double normalized_rmse(const Matrix& y_true, const Matrix& y_pred,
                       const Normalizer& normalizer) {
  if (y_true.rows() != y_pred.rows() || y_true.cols() != y_pred.cols()) {
    throw ShapeError("prediction and truth shapes differ");
  }
  if (y_true.rows() < 1) {
    throw ShapeError("at least one sample is required");
  }
  const Matrix diff = normalizer.apply(y_true) - normalizer.apply(y_pred);
  return std::sqrt(diff.array().square().sum() /
                   static_cast<double>(y_true.rows()));
}

RmseAccumulator::RmseAccumulator(const Normalizer& normalizer)
    : normalizer_(normalizer) {}

void RmseAccumulator::add(const Vector& y_true, const Vector& y_pred) {
  const Vector diff =
      normalizer_.apply_row(y_true) - normalizer_.apply_row(y_pred);
  sum_squares_ += diff.squaredNorm();
  ++count_;
}

double RmseAccumulator::value() const {
  if (count_ == 0) {
    throw std::logic_error("no samples accumulated");
  }
  return std::sqrt(sum_squares_ / static_cast<double>(count_));
}

void ConfusionCounts::add(int true_label, int predicted_label) {
  if ((true_label != 1 && true_label != -1) ||
      (predicted_label != 1 && predicted_label != -1)) {
    throw std::invalid_argument("labels must be +1 or -1");
  }
  if (true_label == 1) {
    predicted_label == 1 ? ++tp : ++fn;
  } else {
    predicted_label == -1 ? ++tn : ++fp;
  }
}

void ConfusionCounts::merge(const ConfusionCounts& other) {
  tp += other.tp;
  tn += other.tn;
  fp += other.fp;
  fn += other.fn;
}

ImbalanceMetrics imbalance_metrics(const ConfusionCounts& counts) {
  if (counts.positives() == 0 || counts.negatives() == 0) {
    throw std::invalid_argument(
        "metrics undefined: one of the classes is empty");
  }
  ImbalanceMetrics m;
  m.tpr = static_cast<double>(counts.tp) /
          static_cast<double>(counts.positives());
  m.tnr = static_cast<double>(counts.tn) /
          static_cast<double>(counts.negatives());
  m.gm = std::sqrt(m.tpr * m.tnr);
  m.ta = 0.5 * (m.tpr + m.tnr);
  return m;
}

}  // namespace elmstream
