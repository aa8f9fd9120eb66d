#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elmstream/data_csv.hpp"
#include "elmstream/metrics.hpp"
#include "elmstream/narx.hpp"
#include "elmstream/online.hpp"
#include "elmstream/plant.hpp"
#include "elmstream/report.hpp"
#include "elmstream/serialize.hpp"

namespace elmstream {

/// Flat run configuration. Every field maps to a same-named key in the
/// key=value config file and to a same-named CLI flag; flags win.
struct RunConfig {
  std::string task = "identify";  // identify | envelope
  std::string trainer = "oselm";  // batch | linear | oselm | sgelm
  std::string activation = "sigmoid";
  int hidden_dim = -1;            // -1: task default (identify 100, envelope 10)
  double ridge = 0.1;
  double gamma = -1.0;            // -1: task default (identify 0.0008, envelope 0.001)
  double scale_factor = 1.0;      // f_s for the weighted gradient trainer
  bool weighted = false;
  bool allow_unstable = false;
  long init_size = 800;           // N0
  int input_lags = 1;
  int output_lags = 1;
  long horizon = 600;
  double scale = 1.0;             // shrinks the task's default split sizes
  long length = -1;               // -1: train_rows + eval_rows
  std::uint64_t seed = 42;
  int hold_min = 5;
  int hold_max = 15;
  double u1_lo = 0.2, u1_hi = 1.0;
  double u2_lo = 0.0, u2_hi = 1.0;
  double u3_lo = 0.0, u3_hi = 1.0;
  double sigma_noise = 0.01;
  std::string data_path;
  std::string checkpoint_path;
  std::string report_path;
  std::string predictions_path;

  bool is_identify() const { return task == "identify"; }
  int resolved_hidden_dim() const;
  double resolved_gamma() const;
  long train_rows() const;
  long eval_rows() const;
  long total_rows() const;
  NarxConfig narx() const;
  void validate() const;
};

/// Seeds for the independent random streams of one run, all derived from
/// the master seed in a fixed order.
struct DerivedSeeds {
  std::uint64_t aprbs;
  std::uint64_t noise;
  std::uint64_t layer;
};
DerivedSeeds derive_seeds(std::uint64_t master);

/// Sets one config key from its text value; unknown keys are rejected.
void apply_key(RunConfig& config, const std::string& key,
               const std::string& value);
/// Parses key=value lines ('#' starts a comment) and applies them in order.
void apply_config_text(RunConfig& config, const std::string& text);
void load_config_file(RunConfig& config, const std::string& path);
/// All config keys, in documentation order.
const std::vector<std::string>& config_keys();

struct GenResult {
  long rows;
  double minority_fraction;
  Report report;
};

struct TrainResult {
  TrainerKind trainer;
  double train_time_s;
  double w_norm;
  std::optional<StabilityVerdict> verdict;
  Checkpoint checkpoint;
  Report report;
};

struct EvalResult {
  // identify task
  double osap_rmse = 0.0;
  double msap_rmse = 0.0;
  // envelope task
  std::optional<ImbalanceMetrics> classification;
  Report report;
  std::string predictions_csv;
};

struct CompareRow {
  TrainerKind trainer;
  TrainResult train;
  EvalResult eval;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  std::string table;
};

/// Generates excitation + plant response and writes the data CSV.
GenResult cmd_gen_data(const RunConfig& config);

/// Trains on the leading train split of the data file and writes the
/// checkpoint. Streaming trainers batch-initialize on the first N0 samples
/// and then stream the rest one row at a time.
TrainResult cmd_train(const RunConfig& config);

/// Evaluates a checkpoint on the trailing eval split: OSAP/MSAP RMSE for
/// the identify task, confusion metrics for the envelope task.
EvalResult cmd_evaluate(const RunConfig& config);

/// Trains and evaluates all four trainers on one data file and renders a
/// comparison table.
CompareResult cmd_compare(const RunConfig& config);

}  // namespace elmstream
