#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "elmstream/metrics.hpp"
#include "elmstream/rng.hpp"

using namespace elmstream;

namespace {

Matrix random_matrix(long rows, long cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) m(r, c) = rng.uniform(-3.0, 3.0);
  }
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("normalization maps the fitted range onto [-1, 1]") {
  Matrix data(3, 2);
  data << 0.0, 10.0, 5.0, 20.0, 10.0, 30.0;
  const Normalizer norm = Normalizer::fit(data);
  CHECK(norm.min()(0) == 0.0);
  CHECK(norm.max()(0) == 10.0);
  CHECK(norm.min()(1) == 10.0);
  CHECK(norm.max()(1) == 30.0);

  const Matrix scaled = norm.apply(data);
  CHECK(scaled(0, 0) == -1.0);
  CHECK(scaled(2, 0) == 1.0);
  CHECK(scaled(1, 0) == 0.0);
  CHECK(scaled(1, 1) == 0.0);

  Vector outside(2);
  outside << 15.0, 40.0;
  const Vector mapped = norm.apply_row(outside);
  CHECK(mapped(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(mapped(1) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("normalization round-trips through its inverse") {
  const Matrix data = random_matrix(50, 3, 7);
  const Normalizer norm = Normalizer::fit(data);
  const Matrix fresh = random_matrix(20, 3, 8);
  CHECK(((norm.invert(norm.apply(fresh)) - fresh).cwiseAbs().maxCoeff()) <
        1e-12);
  Vector row = fresh.row(0).transpose();
  CHECK((norm.invert_row(norm.apply_row(row)) - row).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("fitting a constant channel fails and names the channel") {
  Matrix data(3, 2);
  data << 1.0, 4.0, 2.0, 4.0, 3.0, 4.0;
  CHECK_THROWS_WITH_AS(Normalizer::fit(data),
                       doctest::Contains("channel 1"), std::invalid_argument);
  CHECK_THROWS_AS(Normalizer::fit(Matrix(0, 2)), std::invalid_argument);
}

TEST_CASE("explicit bounds behave like fitted bounds") {
  Vector lo(1), hi(1);
  lo << -2.0;
  hi << 2.0;
  const Normalizer norm = Normalizer::from_bounds(lo, hi);
  Vector x(1);
  x << 1.0;
  CHECK(norm.apply_row(x)(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(Normalizer::from_bounds(hi, lo), std::invalid_argument);
}

TEST_CASE("normalized error matches hand-computed values") {
  Vector lo(1), hi(1);
  lo << -1.0;
  hi << 1.0;
  const Normalizer identity = Normalizer::from_bounds(lo, hi);

  Matrix truth(2, 1), pred(2, 1);
  truth << 0.5, -0.5;
  pred << 0.5, -0.5;
  CHECK(normalized_rmse(truth, pred, identity) == 0.0);

  pred << 0.5, 0.5;
  CHECK(normalized_rmse(truth, pred, identity) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

  Vector lo2(2), hi2(2);
  lo2 << -1.0, -1.0;
  hi2 << 1.0, 1.0;
  const Normalizer identity2 = Normalizer::from_bounds(lo2, hi2);
  Matrix t2(2, 2), p2(2, 2);
  t2 << 0.0, 0.0, 0.0, 0.0;
  p2 << 1.0, 1.0, 0.0, 0.0;
  // channel errors sum inside the per-sample mean: sqrt((1+1+0+0)/2) = 1
  CHECK(normalized_rmse(t2, p2, identity2) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("the error is computed on the normalized scale") {
  Vector lo(1), hi(1);
  lo << 0.0;
  hi << 10.0;
  const Normalizer norm = Normalizer::from_bounds(lo, hi);
  Matrix truth(1, 1), pred(1, 1);
  truth << 0.0;
  pred << 10.0;
  // full-range miss: normalized gap is 2
  CHECK(normalized_rmse(truth, pred, norm) ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("the streaming accumulator equals the one-shot computation") {
  const Matrix truth = random_matrix(40, 2, 11);
  const Matrix pred = random_matrix(40, 2, 12);
  const Normalizer norm = Normalizer::fit(random_matrix(100, 2, 13));

  RmseAccumulator acc(norm);
  for (long i = 0; i < truth.rows(); ++i) {
    acc.add(truth.row(i).transpose(), pred.row(i).transpose());
  }
  CHECK(acc.count() == 40);
  CHECK(acc.value() ==
        doctest::Approx(normalized_rmse(truth, pred, norm)).epsilon(1e-13));
  CHECK_THROWS_AS(RmseAccumulator(norm).value(), std::logic_error);
}

TEST_CASE("confusion counts classify each outcome") {
  ConfusionCounts c;
  c.add(1, 1);
  c.add(1, -1);
  c.add(-1, -1);
  c.add(-1, 1);
  CHECK(c.tp == 1);
  CHECK(c.fn == 1);
  CHECK(c.tn == 1);
  CHECK(c.fp == 1);
  CHECK(c.positives() == 2);
  CHECK(c.negatives() == 2);
  CHECK(c.total() == 4);

  ConfusionCounts other;
  other.add(1, 1);
  c.merge(other);
  CHECK(c.tp == 2);
  CHECK(c.total() == 5);

  CHECK_THROWS_AS(c.add(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(c.add(1, 2), std::invalid_argument);
}

TEST_CASE("imbalance metrics match hand-computed examples") {
  ConfusionCounts perfect;
  perfect.tp = 5;
  perfect.tn = 3;
  const ImbalanceMetrics mp = imbalance_metrics(perfect);
  CHECK(mp.tpr == 1.0);
  CHECK(mp.tnr == 1.0);
  CHECK(mp.gm == 1.0);
  CHECK(mp.ta == 1.0);

  // an all-positive predictor on a 9:1 imbalanced set
  ConfusionCounts blind;
  blind.tp = 9;
  blind.fp = 1;
  const ImbalanceMetrics mb = imbalance_metrics(blind);
  CHECK(mb.tpr == 1.0);
  CHECK(mb.tnr == 0.0);
  CHECK(mb.gm == 0.0);
  CHECK(mb.ta == 0.5);

  ConfusionCounts mixed;
  mixed.tp = 3;
  mixed.fn = 1;
  mixed.tn = 8;
  mixed.fp = 2;
  const ImbalanceMetrics mm = imbalance_metrics(mixed);
  CHECK(std::abs(mm.tpr - 0.75) < 1e-12);
  CHECK(std::abs(mm.tnr - 0.8) < 1e-12);
  CHECK(std::abs(mm.gm - 0.7745966692414834) < 1e-12);
  CHECK(std::abs(mm.ta - 0.775) < 1e-12);

  ConfusionCounts empty;
  empty.tp = 4;
  CHECK_THROWS_AS(imbalance_metrics(empty), std::invalid_argument);
}

TEST_CASE("the geometric mean never exceeds the balanced accuracy") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    ConfusionCounts c;
    c.tp = rng.uniform_int(0, 50);
    c.fn = rng.uniform_int(0, 50);
    c.tn = rng.uniform_int(0, 50);
    c.fp = rng.uniform_int(0, 50);
    if (c.positives() == 0 || c.negatives() == 0) continue;
    const ImbalanceMetrics m = imbalance_metrics(c);
    CHECK(m.gm <= m.ta + 1e-12);
    CHECK(m.tpr >= 0.0);
    CHECK(m.tpr <= 1.0);
    CHECK(m.tnr >= 0.0);
    CHECK(m.tnr <= 1.0);
  }
}

TEST_CASE("metrics are invariant to sample order") {
  SplitMix64 rng(22);
  ConfusionCounts forward, backward;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 100; ++i) {
    const int truth = rng.uniform01() < 0.8 ? 1 : -1;
    const int pred = rng.uniform01() < 0.7 ? truth : -truth;
    pairs.emplace_back(truth, pred);
  }
  for (const auto& [t, p] : pairs) forward.add(t, p);
  for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
    backward.add(it->first, it->second);
  }
  const ImbalanceMetrics mf = imbalance_metrics(forward);
  const ImbalanceMetrics mb = imbalance_metrics(backward);
  CHECK(mf.tpr == mb.tpr);
  CHECK(mf.tnr == mb.tnr);
  CHECK(mf.gm == mb.gm);
  CHECK(mf.ta == mb.ta);
}

TEST_SUITE_END();
