#include "elmstream/online.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "elmstream/kernels.hpp"

namespace elmstream {

namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(what) + " contains non-finite values");
  }
}

}  // namespace

StepGain StepGain::scalar(double gamma) {
  if (!std::isfinite(gamma)) {
    throw std::invalid_argument("step gain must be finite");
  }
  StepGain g;
  g.scalar_ = gamma;
  return g;
}

StepGain StepGain::matrix(Matrix gamma) {
  if (gamma.rows() != gamma.cols() || gamma.rows() < 1) {
    throw ShapeError("step gain matrix must be square and non-empty");
  }
  if (!gamma.allFinite()) {
    throw std::invalid_argument("step gain must be finite");
  }
  StepGain g;
  g.matrix_ = std::move(gamma);
  return g;
}

double StepGain::scalar_value() const {
  if (!is_scalar()) {
    throw std::logic_error("step gain is a full matrix");
  }
  return scalar_;
}

Matrix StepGain::dense(int dim) const {
  if (matrix_) {
    if (matrix_->rows() != dim) {
      throw ShapeError("step gain dimension mismatch");
    }
    return *matrix_;
  }
  return scalar_ * Matrix::Identity(dim, dim);
}

Vector StepGain::apply(const Vector& phi) const {
  if (matrix_) {
    if (matrix_->cols() != phi.size()) {
      throw ShapeError("step gain dimension mismatch");
    }
    return *matrix_ * phi;
  }
  return scalar_ * phi;
}

double StepGain::quadratic(const Vector& phi) const {
  return phi.dot(apply(phi));
}

Matrix StepGain::solve(const Matrix& m) const {
  if (!matrix_) {
    if (scalar_ == 0.0) {
      throw std::invalid_argument("step gain is singular");
    }
    return m / scalar_;
  }
  if (matrix_->cols() != m.rows()) {
    throw ShapeError("step gain dimension mismatch");
  }
  Eigen::LLT<Matrix> llt(*matrix_);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("step gain is singular or not positive definite");
  }
  return llt.solve(m);
}

double StepGain::max_eigenvalue() const {
  if (!matrix_) {
    return scalar_;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(*matrix_, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

const char* stability_name(StabilityClass cls) {
  switch (cls) {
    case StabilityClass::convergent:
      return "convergent";
    case StabilityClass::bounded:
      return "bounded";
    case StabilityClass::violating:
      return "violating";
  }
  return "violating";
}

namespace {

StabilityVerdict classify(double max_ev) {
  StabilityClass cls;
  if (max_ev > 0.0 && max_ev < 1.0) {
    cls = StabilityClass::convergent;
  } else if (max_ev >= 1.0 && max_ev < 2.0) {
    cls = StabilityClass::bounded;
  } else {
    cls = StabilityClass::violating;
  }
  return StabilityVerdict{cls, max_ev};
}

}  // namespace

StabilityVerdict check_stability(const Matrix& step_matrix) {
  if (step_matrix.rows() != step_matrix.cols() || step_matrix.rows() < 1) {
    throw std::invalid_argument("step matrix must be square and non-empty");
  }
  if (!step_matrix.allFinite()) {
    throw std::invalid_argument("step matrix contains non-finite values");
  }
  const double scale = step_matrix.cwiseAbs().maxCoeff();
  const double asym = (step_matrix - step_matrix.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > 1e-9 * scale) {
    throw std::invalid_argument("step matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(step_matrix, Eigen::EigenvaluesOnly);
  return classify(eig.eigenvalues().maxCoeff());
}

StabilityVerdict check_stability(const StepGain& gain, int dim) {
  if (gain.is_scalar()) {
    return classify(gain.scalar_value());
  }
  return check_stability(gain.dense(dim));
}

double lyapunov_value(const Matrix& w_est, const Matrix& w_star,
                      const StepGain& gain) {
  if (w_est.rows() != w_star.rows() || w_est.cols() != w_star.cols()) {
    throw ShapeError("weight matrices have different shapes");
  }
  const Matrix diff = w_star - w_est;
  const Matrix solved = gain.solve(diff);
  return (diff.array() * solved.array()).sum();
}

OselmState::OselmState(ElmModel model, Matrix covariance,
                       std::uint64_t samples_seen)
    : model_(std::move(model)),
      covariance_(std::move(covariance)),
      samples_seen_(samples_seen) {
  if (covariance_.rows() != covariance_.cols() ||
      covariance_.rows() != model_.feature_dim()) {
    throw ShapeError("covariance shape does not match feature dimension");
  }
}

OselmState OselmState::init(const Dataset& init_chunk,
                            const HiddenLayer& layer, double ridge) {
  if (ridge < 0.0) {
    throw std::invalid_argument("ridge must be >= 0");
  }
  const Matrix h = kernels::feature_matrix(layer, init_chunk.inputs);
  Matrix k = kernels::gram(h);
  k.diagonal().array() += ridge;
  Eigen::LLT<Matrix> llt(k);
  if (llt.info() != Eigen::Success) {
    throw IllConditionedError("initialization normal matrix is singular",
                              std::numeric_limits<double>::infinity());
  }
  Matrix covariance =
      llt.solve(Matrix::Identity(layer.hidden_dim(), layer.hidden_dim()));
  covariance = 0.5 * (covariance + covariance.transpose()).eval();
  Matrix w0 = covariance * kernels::cross(h, init_chunk.targets);
  return OselmState(ElmModel(layer, std::move(w0)), std::move(covariance),
                    static_cast<std::uint64_t>(init_chunk.rows()));
}

OselmState OselmState::from_parts(ElmModel model, Matrix covariance,
                                  std::uint64_t samples_seen) {
  return OselmState(std::move(model), std::move(covariance), samples_seen);
}

void OselmState::update(const Vector& x, const Vector& y) {
  require_finite(x, "input");
  update_with_features(model_.features(x), y);
}

void OselmState::update_with_features(const Vector& phi, const Vector& y) {
  if (phi.size() != model_.feature_dim()) {
    throw ShapeError("feature length does not match model");
  }
  if (y.size() != model_.output_dim()) {
    throw ShapeError("target length does not match model");
  }
  require_finite(phi, "features");
  require_finite(y, "target");
  const Vector mphi = covariance_ * phi;
  const double denom = 1.0 + phi.dot(mphi);
  covariance_ -= (mphi * mphi.transpose()) / denom;
  covariance_ = 0.5 * (covariance_ + covariance_.transpose()).eval();
  const Matrix& w = model_.output_weights();
  const Eigen::RowVectorXd err = y.transpose() - phi.transpose() * w;
  model_.mutable_output_weights() += (covariance_ * phi) * err;
  ++samples_seen_;
}

SgelmState::SgelmState(ElmModel model, StepGain gain, double scale_factor,
                       bool allow_unstable)
    : model_(std::move(model)),
      gain_(std::move(gain)),
      scale_factor_(scale_factor),
      verdict_(check_stability(gain_, model_.feature_dim())) {
  if (!(scale_factor_ > 0.0)) {
    throw std::invalid_argument("scale factor must be positive");
  }
  if (verdict_.cls == StabilityClass::violating && !allow_unstable) {
    throw StabilityError(
        "step gain is in the violating stability class (max eigenvalue " +
        std::to_string(verdict_.max_eigenvalue) + ")");
  }
}

SgelmState SgelmState::from_parts(ElmModel model, StepGain gain,
                                  double scale_factor, std::uint64_t majority,
                                  std::uint64_t minority,
                                  std::uint64_t samples_seen) {
  SgelmState state(std::move(model), std::move(gain), scale_factor, true);
  state.majority_count_ = majority;
  state.minority_count_ = minority;
  state.samples_seen_ = samples_seen;
  return state;
}

void SgelmState::validate(const Vector& phi, const Vector& y) const {
  if (phi.size() != model_.feature_dim()) {
    throw ShapeError("feature length does not match model");
  }
  if (y.size() != model_.output_dim()) {
    throw ShapeError("target length does not match model");
  }
  require_finite(phi, "features");
  require_finite(y, "target");
}

void SgelmState::step(const Vector& phi, const Vector& y, double extra_scale) {
  validate(phi, y);
  const Matrix& w = model_.output_weights();
  const Eigen::RowVectorXd err = y.transpose() - phi.transpose() * w;
  model_.mutable_output_weights() += extra_scale * gain_.apply(phi) * err;
  ++samples_seen_;
}

void SgelmState::update(const Vector& x, const Vector& y) {
  require_finite(x, "input");
  step(model_.features(x), y, 1.0);
}

void SgelmState::update_with_features(const Vector& phi, const Vector& y) {
  step(phi, y, 1.0);
}

void SgelmState::update_weighted(const Vector& x, const Vector& y, int label) {
  require_finite(x, "input");
  update_weighted_with_features(model_.features(x), y, label);
}

void SgelmState::update_weighted_with_features(const Vector& phi,
                                               const Vector& y, int label) {
  if (label != 1 && label != -1) {
    throw std::invalid_argument("label must be +1 or -1");
  }
  validate(phi, y);
  if (label == 1) {
    ++majority_count_;
    step(phi, y, 1.0);
    return;
  }
  ++minority_count_;
  const double r = static_cast<double>(majority_count_) /
                   static_cast<double>(minority_count_);
  step(phi, y, r * scale_factor_);
}

void SgelmState::set_counts(std::uint64_t majority, std::uint64_t minority) {
  majority_count_ = majority;
  minority_count_ = minority;
}

}  // namespace elmstream
