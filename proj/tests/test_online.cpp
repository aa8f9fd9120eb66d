#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "elmstream/kernels.hpp"
#include "elmstream/online.hpp"
#include "elmstream/plant.hpp"
#include "elmstream/rng.hpp"
#include "oracles.hpp"

using namespace elmstream;

namespace {

Vector vec1(double v) {
  Vector x(1);
  x << v;
  return x;
}

OselmState scalar_rls_state(double w0, double m0) {
  return OselmState::from_parts(ElmModel::linear(1, Matrix::Constant(1, 1, w0)),
                                Matrix::Constant(1, 1, m0), 0);
}

Matrix random_matrix(long rows, long cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) m(r, c) = rng.uniform(-1.0, 1.0);
  }
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("online");

TEST_CASE("step gain applies, squares and solves consistently") {
  const StepGain scalar = StepGain::scalar(0.5);
  CHECK(scalar.is_scalar());
  CHECK(scalar.scalar_value() == 0.5);
  CHECK(scalar.max_eigenvalue() == 0.5);
  Vector phi(2);
  phi << 1.0, 3.0;
  CHECK(scalar.apply(phi) == 0.5 * phi);
  CHECK(scalar.quadratic(phi) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(scalar.dense(2) == 0.5 * Matrix::Identity(2, 2));

  Matrix g(2, 2);
  g << 0.5, 0.0, 0.0, 2.0;
  const StepGain full = StepGain::matrix(g);
  CHECK_FALSE(full.is_scalar());
  CHECK(full.max_eigenvalue() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(full.apply(phi)(0) == 0.5);
  CHECK(full.apply(phi)(1) == 6.0);
  CHECK(full.quadratic(phi) == doctest::Approx(0.5 + 18.0).epsilon(1e-12));
  const Matrix solved = full.solve(Matrix::Ones(2, 1));
  CHECK(solved(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(solved(1, 0) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(StepGain::scalar(0.0).solve(Matrix::Ones(1, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(StepGain::matrix(Matrix::Ones(2, 3)), ShapeError);
}

TEST_CASE("stability classes split at eigenvalues 1 and 2") {
  CHECK(check_stability(StepGain::scalar(0.5), 4).cls ==
        StabilityClass::convergent);
  CHECK(check_stability(StepGain::scalar(1.0), 4).cls ==
        StabilityClass::bounded);
  CHECK(check_stability(StepGain::scalar(1.5), 4).cls ==
        StabilityClass::bounded);
  CHECK(check_stability(StepGain::scalar(2.0), 4).cls ==
        StabilityClass::violating);
  CHECK(check_stability(StepGain::scalar(2.5), 4).cls ==
        StabilityClass::violating);
  CHECK(check_stability(StepGain::scalar(0.0), 4).cls ==
        StabilityClass::violating);
  CHECK(check_stability(StepGain::scalar(-0.3), 4).cls ==
        StabilityClass::violating);

  Matrix g(2, 2);
  g << 0.5, 0.0, 0.0, 1.2;
  const StabilityVerdict v = check_stability(g);
  CHECK(v.cls == StabilityClass::bounded);
  CHECK(v.max_eigenvalue == doctest::Approx(1.2).epsilon(1e-12));

  Matrix asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(check_stability(asym), std::invalid_argument);
  CHECK_THROWS_AS(check_stability(Matrix::Ones(2, 3)), std::invalid_argument);

  CHECK(std::string(stability_name(StabilityClass::convergent)) ==
        "convergent");
  CHECK(std::string(stability_name(StabilityClass::bounded)) == "bounded");
  CHECK(std::string(stability_name(StabilityClass::violating)) == "violating");
}

TEST_CASE("lyapunov value is the gain-weighted squared distance") {
  const Matrix w_star = Matrix::Ones(2, 1);
  const Matrix zero = Matrix::Zero(2, 1);
  CHECK(lyapunov_value(zero, w_star, StepGain::scalar(1.0)) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(lyapunov_value(zero, w_star, StepGain::scalar(0.5)) ==
        doctest::Approx(4.0).epsilon(1e-15));
  CHECK(lyapunov_value(w_star, w_star, StepGain::scalar(0.5)) == 0.0);

  Matrix g(2, 2);
  g << 0.5, 0.0, 0.0, 2.0;
  CHECK(lyapunov_value(zero, w_star, StepGain::matrix(g)) ==
        doctest::Approx(2.5).epsilon(1e-12));

  CHECK_THROWS_AS(lyapunov_value(Matrix::Zero(3, 1), w_star,
                                 StepGain::scalar(1.0)),
                  ShapeError);
}

TEST_CASE("scalar recursive update matches the closed form") {
  OselmState state = scalar_rls_state(0.0, 1.0);
  state.update_with_features(vec1(1.0), vec1(1.0));
  CHECK(state.covariance()(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(state.model().output_weights()(0, 0) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(state.samples_seen() == 1);

  state.update_with_features(vec1(1.0), vec1(1.0));
  CHECK(state.covariance()(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(state.model().output_weights()(0, 0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(state.samples_seen() == 2);
}

TEST_CASE("a zero feature vector leaves the recursive state unchanged") {
  OselmState state = scalar_rls_state(0.25, 0.75);
  state.update_with_features(vec1(0.0), vec1(5.0));
  CHECK(state.covariance()(0, 0) == 0.75);
  CHECK(state.model().output_weights()(0, 0) == 0.25);
  CHECK(state.samples_seen() == 1);
}

TEST_CASE("batch initialization matches the regularized normal equations") {
  HiddenLayer layer(3, 6, ActivationKind::sigmoid, 17);
  const Matrix x = random_matrix(40, 3, 18);
  const Matrix y = random_matrix(40, 2, 19);
  const double ridge = 0.05;
  const OselmState state = OselmState::init(Dataset(x, y), layer, ridge);

  const Matrix h = kernels::feature_matrix(layer, x);
  const Matrix normal =
      h.transpose() * h + ridge * Matrix::Identity(6, 6);
  CHECK(oracles::rel_frobenius(state.covariance(), normal.inverse()) < 1e-10);
  CHECK(oracles::rel_frobenius(state.model().output_weights(),
                               oracles::ridge_solution(h, y, ridge)) < 1e-9);
  CHECK(state.samples_seen() == 40);
  CHECK(state.covariance() == state.covariance().transpose());
}

TEST_CASE("recursive updates reproduce the batch solution on all data") {
  HiddenLayer layer(4, 7, ActivationKind::sine, 23);
  const Matrix x = random_matrix(250, 4, 24);
  const Matrix y = random_matrix(250, 2, 25);
  const double ridge = 0.01;

  OselmState state =
      OselmState::init(Dataset(x.topRows(50), y.topRows(50)), layer, ridge);
  for (long i = 50; i < x.rows(); ++i) {
    state.update(x.row(i).transpose(), y.row(i).transpose());
  }

  const ElmModel batch = batch_train(Dataset(x, y), layer, ridge);
  CHECK(oracles::rel_frobenius(state.model().output_weights(),
                               batch.output_weights()) < 1e-8);
  CHECK(state.samples_seen() == 250);
  CHECK(state.covariance() == state.covariance().transpose());
}

TEST_CASE("recursive update by input equals update by features") {
  HiddenLayer layer(2, 5, ActivationKind::sigmoid, 31);
  const Matrix x = random_matrix(60, 2, 32);
  const Matrix y = random_matrix(60, 1, 33);
  const Dataset chunk(x.topRows(10), y.topRows(10));

  OselmState by_input = OselmState::init(chunk, layer, 0.1);
  OselmState by_features = OselmState::init(chunk, layer, 0.1);
  for (long i = 10; i < x.rows(); ++i) {
    by_input.update(x.row(i).transpose(), y.row(i).transpose());
    by_features.update_with_features(layer.map(x.row(i).transpose()),
                                     y.row(i).transpose());
  }
  CHECK(by_input.model().output_weights() ==
        by_features.model().output_weights());
  CHECK(by_input.covariance() == by_features.covariance());
}

TEST_CASE("gradient steps match hand-computed values") {
  SgelmState state(ElmModel::linear(2, Matrix::Zero(2, 1)),
                   StepGain::scalar(0.5));
  Vector phi(2);
  phi << 1.0, 0.0;
  state.update_with_features(phi, vec1(1.0));
  CHECK(state.model().output_weights()(0, 0) == 0.5);
  CHECK(state.model().output_weights()(1, 0) == 0.0);

  state.update_with_features(phi, vec1(1.0));
  CHECK(state.model().output_weights()(0, 0) == 0.75);
  CHECK(state.model().output_weights()(1, 0) == 0.0);
  CHECK(state.samples_seen() == 2);
}

TEST_CASE("matrix gains scale each feature direction separately") {
  Matrix g(2, 2);
  g << 0.5, 0.0, 0.0, 0.25;
  SgelmState state(ElmModel::linear(2, Matrix::Zero(2, 1)),
                   StepGain::matrix(g));
  Vector phi(2);
  phi << 1.0, 1.0;
  state.update_with_features(phi, vec1(1.0));
  CHECK(state.model().output_weights()(0, 0) == 0.5);
  CHECK(state.model().output_weights()(1, 0) == 0.25);
}

TEST_CASE("gradient step descends the instantaneous squared error") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix w = random_matrix(4, 2, 1000 + trial);
    Vector phi = random_matrix(4, 1, 2000 + trial).col(0);
    Vector y = random_matrix(2, 1, 3000 + trial).col(0);

    const auto loss = [&](const Matrix& m) {
      return 0.5 * (y - m.transpose() * phi).squaredNorm();
    };
    const Eigen::RowVectorXd err = y.transpose() - phi.transpose() * w;
    const Matrix analytic = -phi * err;

    const double h = 1e-4;
    for (long i = 0; i < w.rows(); ++i) {
      for (long j = 0; j < w.cols(); ++j) {
        Matrix up = w, down = w;
        up(i, j) += h;
        down(i, j) -= h;
        const double numeric = (loss(up) - loss(down)) / (2.0 * h);
        CHECK(std::abs(numeric - analytic(i, j)) < 1e-6);
      }
    }

    const double gamma = rng.uniform(0.05, 0.4);
    SgelmState state(ElmModel::linear(4, w), StepGain::scalar(gamma));
    state.update_with_features(phi, y);
    const Matrix expected = w - gamma * analytic;
    CHECK(oracles::rel_frobenius(state.model().output_weights(), expected) <
          1e-14);
  }
}

TEST_CASE("violating gains are rejected at construction unless allowed") {
  CHECK_THROWS_AS(SgelmState(ElmModel::linear(2, Matrix::Zero(2, 1)),
                             StepGain::scalar(2.5)),
                  StabilityError);
  const SgelmState tolerated(ElmModel::linear(2, Matrix::Zero(2, 1)),
                             StepGain::scalar(2.5), 1.0, true);
  CHECK(tolerated.verdict().cls == StabilityClass::violating);
  CHECK(tolerated.verdict().max_eigenvalue == 2.5);

  CHECK_THROWS_AS(SgelmState(ElmModel::linear(2, Matrix::Zero(2, 1)),
                             StepGain::scalar(0.5), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(SgelmState(ElmModel::linear(2, Matrix::Zero(2, 1)),
                             StepGain::scalar(0.5), -1.0),
                  std::invalid_argument);
}

TEST_CASE("minority steps scale by the running imbalance ratio") {
  SgelmState state(ElmModel::linear(2, Matrix::Zero(2, 1)),
                   StepGain::scalar(0.5));
  state.set_counts(4, 0);
  Vector phi(2);
  phi << 1.0, 0.0;

  state.update_weighted_with_features(phi, vec1(1.0), -1);
  CHECK(state.majority_count() == 4);
  CHECK(state.minority_count() == 1);
  CHECK(state.model().output_weights()(0, 0) == 2.0);
  CHECK(state.model().output_weights()(1, 0) == 0.0);

  SgelmState majority(ElmModel::linear(2, Matrix::Zero(2, 1)),
                      StepGain::scalar(0.5));
  majority.set_counts(4, 2);
  majority.update_weighted_with_features(phi, vec1(1.0), 1);
  CHECK(majority.majority_count() == 5);
  CHECK(majority.model().output_weights()(0, 0) == 0.5);

  SgelmState scaled(ElmModel::linear(2, Matrix::Zero(2, 1)),
                    StepGain::scalar(0.5), 1.5);
  scaled.set_counts(4, 0);
  scaled.update_weighted_with_features(phi, vec1(1.0), -1);
  CHECK(scaled.model().output_weights()(0, 0) == 3.0);

  CHECK_THROWS_AS(state.update_weighted_with_features(phi, vec1(1.0), 0),
                  std::invalid_argument);
}

TEST_CASE("non-finite inputs are rejected without touching the state") {
  Vector bad(2);
  bad << 1.0, std::nan("");

  OselmState rls = OselmState::from_parts(
      ElmModel::linear(2, Matrix::Ones(2, 1)), Matrix::Identity(2, 2), 3);
  CHECK_THROWS_AS(rls.update_with_features(bad, vec1(1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(rls.update_with_features(Vector::Ones(2), vec1(std::nan(""))),
                  std::invalid_argument);
  CHECK(rls.model().output_weights() == Matrix::Ones(2, 1));
  CHECK(rls.covariance() == Matrix::Identity(2, 2));
  CHECK(rls.samples_seen() == 3);

  SgelmState sg(ElmModel::linear(2, Matrix::Ones(2, 1)),
                StepGain::scalar(0.5));
  sg.set_counts(7, 2);
  CHECK_THROWS_AS(sg.update_weighted_with_features(bad, vec1(1.0), -1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sg.update_with_features(Vector::Ones(3), vec1(1.0)),
                  ShapeError);
  CHECK(sg.model().output_weights() == Matrix::Ones(2, 1));
  CHECK(sg.majority_count() == 7);
  CHECK(sg.minority_count() == 2);
  CHECK(sg.samples_seen() == 0);
}

TEST_CASE("the tracking function never increases under a stable gain") {
  HiddenLayer layer(2, 3, ActivationKind::sigmoid, 5);
  const Matrix w_star = random_matrix(3, 2, 6);
  const SampleStream stream = teacher_stream(layer, w_star, -1.0, 1.0, 5000, 9);
  const StepGain gain = StepGain::scalar(0.5);

  SgelmState state(ElmModel(layer, Matrix::Zero(3, 2)), gain);
  double v_prev = lyapunov_value(state.model().output_weights(), w_star, gain);
  const double slack = 1e-12 * v_prev;
  for (long i = 0; i < stream.size(); ++i) {
    state.update(stream.inputs.row(i).transpose(),
                 stream.targets.row(i).transpose());
    const double v =
        lyapunov_value(state.model().output_weights(), w_star, gain);
    REQUIRE(v <= v_prev + slack);
    v_prev = v;
  }
}

TEST_CASE("each step shrinks the tracking function by the predicted amount") {
  HiddenLayer layer(2, 3, ActivationKind::sigmoid, 41);
  const Matrix w_star = random_matrix(3, 2, 42);
  const SampleStream stream = teacher_stream(layer, w_star, -1.0, 1.0, 200, 43);
  const StepGain gain = StepGain::scalar(0.5);

  SgelmState state(ElmModel(layer, Matrix::Zero(3, 2)), gain);
  for (long i = 0; i < stream.size(); ++i) {
    const Vector x = stream.inputs.row(i).transpose();
    const Vector y = stream.targets.row(i).transpose();
    const Vector phi = layer.map(x);
    const Vector err = y - state.model().predict(x);
    const double v_before =
        lyapunov_value(state.model().output_weights(), w_star, gain);
    state.update(x, y);
    const double v_after =
        lyapunov_value(state.model().output_weights(), w_star, gain);
    const double predicted = (2.0 - gain.quadratic(phi)) * err.squaredNorm();
    CHECK(std::abs((v_before - v_after) - predicted) <=
          1e-10 * std::max(1.0, v_before));
  }
}

TEST_CASE("a violating gain lets the tracking function grow") {
  HiddenLayer layer(2, 3, ActivationKind::sigmoid, 51);
  const Matrix w_star = random_matrix(3, 2, 52);
  const SampleStream stream = teacher_stream(layer, w_star, -1.0, 1.0, 100, 53);
  const StepGain gain = StepGain::scalar(2.5);

  SgelmState state(ElmModel(layer, Matrix::Zero(3, 2)), gain, 1.0, true);
  bool grew = false;
  double v_prev = lyapunov_value(state.model().output_weights(), w_star, gain);
  for (long i = 0; i < stream.size(); ++i) {
    state.update(stream.inputs.row(i).transpose(),
                 stream.targets.row(i).transpose());
    const double v =
        lyapunov_value(state.model().output_weights(), w_star, gain);
    if (v > v_prev) grew = true;
    v_prev = v;
  }
  CHECK(grew);
}

TEST_CASE("iterates stay within the initial distance of the teacher") {
  HiddenLayer layer(3, 4, ActivationKind::sigmoid, 61);
  const Matrix w_star = random_matrix(4, 1, 62);
  const SampleStream stream =
      teacher_stream(layer, w_star, -1.0, 1.0, 2000, 63);
  const StepGain gain = StepGain::scalar(0.3);

  SgelmState state(ElmModel(layer, Matrix::Zero(4, 1)), gain);
  const double initial = w_star.norm();
  for (long i = 0; i < stream.size(); ++i) {
    state.update(stream.inputs.row(i).transpose(),
                 stream.targets.row(i).transpose());
    REQUIRE((state.model().output_weights() - w_star).norm() <=
            initial + 1e-9);
  }
}

TEST_CASE("streaming against a realizable teacher drives the error down") {
  HiddenLayer layer(2, 3, ActivationKind::sigmoid, 71);
  const Matrix w_star = random_matrix(3, 2, 72);
  const SampleStream stream =
      teacher_stream(layer, w_star, -1.0, 1.0, 10000, 73);

  SgelmState state(ElmModel(layer, Matrix::Zero(3, 2)), StepGain::scalar(0.5));
  std::vector<double> errors(stream.size());
  for (long i = 0; i < stream.size(); ++i) {
    const Vector x = stream.inputs.row(i).transpose();
    const Vector y = stream.targets.row(i).transpose();
    errors[i] = (y - state.model().predict(x)).norm();
    state.update(x, y);
  }
  const long decile = stream.size() / 10;
  double first = 0.0, last = 0.0;
  for (long i = 0; i < decile; ++i) {
    first += errors[i];
    last += errors[stream.size() - decile + i];
  }
  CHECK(last < 0.1 * first);

  const SampleStream fresh =
      teacher_stream(layer, w_star, -1.0, 1.0, 200, 74);
  double worst = 0.0;
  for (long i = 0; i < fresh.size(); ++i) {
    const Vector diff = fresh.targets.row(i).transpose() -
                        state.model().predict(fresh.inputs.row(i).transpose());
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-3);
}

TEST_SUITE_END();
