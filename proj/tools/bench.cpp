#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "elmstream/elm_model.hpp"
#include "elmstream/kernels.hpp"
#include "elmstream/online.hpp"
#include "elmstream/plant.hpp"
#include "elmstream/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

elmstream::Matrix random_matrix(long rows, long cols, std::uint64_t seed) {
  elmstream::SplitMix64 rng(seed);
  elmstream::Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      m(r, c) = rng.uniform(-1.0, 1.0);
    }
  }
  return m;
}

template <typename F>
double time_best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = Clock::now();
    f();
    const double dt = seconds_since(t0);
    if (dt < best) best = dt;
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial versus parallel kernel and trainer benchmarks"};
  long rows = 20000;
  int hidden = 100;
  long stream = 10000;
  int repeats = 3;
  std::uint64_t seed = 7;
  app.add_option("--rows", rows, "feature matrix rows");
  app.add_option("--hidden", hidden, "hidden units");
  app.add_option("--stream", stream, "streaming samples for trainer timing");
  app.add_option("--repeats", repeats, "repetitions, best time kept");
  app.add_option("--seed", seed, "rng seed");
  CLI11_PARSE(app, argc, argv);

  using namespace elmstream;

  const int input_dim = 5;
  const HiddenLayer layer(input_dim, hidden, ActivationKind::sigmoid, seed);
  const Matrix inputs = random_matrix(rows, input_dim, seed + 1);

  std::printf("kernel benchmarks: %ld rows, %d hidden units, best of %d\n",
              rows, hidden, repeats);

  Matrix h_serial, h_parallel;
  const double t_feat_s = time_best_of(
      repeats, [&] { h_serial = kernels::feature_matrix_serial(layer, inputs); });
  const double t_feat_p = time_best_of(
      repeats, [&] { h_parallel = kernels::feature_matrix(layer, inputs); });
  std::printf("feature_matrix  serial %8.4fs  parallel %8.4fs  speedup %5.2fx  max|diff| %g\n",
              t_feat_s, t_feat_p, t_feat_s / t_feat_p,
              (h_serial - h_parallel).cwiseAbs().maxCoeff());

  Matrix g_serial, g_parallel;
  const double t_gram_s =
      time_best_of(repeats, [&] { g_serial = kernels::gram_serial(h_serial); });
  const double t_gram_p =
      time_best_of(repeats, [&] { g_parallel = kernels::gram(h_serial); });
  std::printf("gram            serial %8.4fs  parallel %8.4fs  speedup %5.2fx  max|diff| %g\n",
              t_gram_s, t_gram_p, t_gram_s / t_gram_p,
              (g_serial - g_parallel).cwiseAbs().maxCoeff());

  const Matrix w = random_matrix(hidden, 2, seed + 2);
  const ElmModel model(layer, w);
  Matrix p_serial, p_parallel;
  const double t_pred_s = time_best_of(
      repeats, [&] { p_serial = kernels::predict_all_serial(model, inputs); });
  const double t_pred_p = time_best_of(
      repeats, [&] { p_parallel = kernels::predict_all(model, inputs); });
  std::printf("predict_all     serial %8.4fs  parallel %8.4fs  speedup %5.2fx  max|diff| %g\n",
              t_pred_s, t_pred_p, t_pred_s / t_pred_p,
              (p_serial - p_parallel).cwiseAbs().maxCoeff());

  const Matrix w_star = random_matrix(hidden, 2, seed + 3);
  const SampleStream teacher =
      teacher_stream(layer, w_star, -1.0, 1.0, stream, seed + 4);
  const long n0 = std::min<long>(4 * hidden, stream / 2);
  Dataset chunk(teacher.inputs.topRows(n0), teacher.targets.topRows(n0));

  OselmState os = OselmState::init(chunk, layer, 0.1);
  const auto t_os0 = Clock::now();
  for (long i = n0; i < stream; ++i) {
    os.update(teacher.inputs.row(i).transpose(),
              teacher.targets.row(i).transpose());
  }
  const double t_os = seconds_since(t_os0);

  SgelmState sg(batch_train(chunk, layer, 0.1),
                StepGain::scalar(0.5 / hidden));
  const auto t_sg0 = Clock::now();
  for (long i = n0; i < stream; ++i) {
    sg.update(teacher.inputs.row(i).transpose(),
              teacher.targets.row(i).transpose());
  }
  const double t_sg = seconds_since(t_sg0);

  const double n_updates = static_cast<double>(stream - n0);
  std::printf("\nstreaming trainers: %g updates at %d hidden units\n",
              n_updates, hidden);
  std::printf("rls update       %10.3f us/sample\n", 1e6 * t_os / n_updates);
  std::printf("gradient update  %10.3f us/sample\n", 1e6 * t_sg / n_updates);
  std::printf("cost ratio (rls/gradient) %6.2fx\n", t_os / t_sg);
  return 0;
}
