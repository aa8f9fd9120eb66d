#include "elmstream/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "elmstream/elm_model.hpp"
#include "elmstream/kernels.hpp"
#include "elmstream/rng.hpp"

namespace elmstream {

namespace {

constexpr long kIdentifyTrainBase = 11000;
constexpr long kIdentifyEvalBase = 5100;
constexpr long kEnvelopeTrainBase = 14300;
constexpr long kEnvelopeEvalBase = 6200;

long scaled(long base, double scale) {
  return std::lround(static_cast<double>(base) * scale);
}

}  // namespace

int RunConfig::resolved_hidden_dim() const {
  if (hidden_dim > 0) return hidden_dim;
  return is_identify() ? 100 : 10;
}

double RunConfig::resolved_gamma() const {
  if (gamma >= 0.0) return gamma;
  return is_identify() ? 0.0008 : 0.001;
}

long RunConfig::train_rows() const {
  return scaled(is_identify() ? kIdentifyTrainBase : kEnvelopeTrainBase, scale);
}

long RunConfig::eval_rows() const {
  return scaled(is_identify() ? kIdentifyEvalBase : kEnvelopeEvalBase, scale);
}

long RunConfig::total_rows() const {
  return length >= 0 ? length : train_rows() + eval_rows();
}

NarxConfig RunConfig::narx() const {
  NarxConfig n;
  n.input_lags = input_lags;
  n.output_lags = output_lags;
  n.input_dim = 3;
  n.output_dim = 2;
  return n;
}

void RunConfig::validate() const {
  if (task != "identify" && task != "envelope") {
    throw std::invalid_argument("task must be identify or envelope");
  }
  parse_trainer(trainer);
  parse_activation(activation);
  if (input_lags < 1 || output_lags < 1) {
    throw std::invalid_argument("lags must be >= 1");
  }
  if (init_size < 1) {
    throw std::invalid_argument("init_size must be >= 1");
  }
  if (horizon < 1) {
    throw std::invalid_argument("horizon must be >= 1");
  }
  if (!(scale > 0.0)) {
    throw std::invalid_argument("scale must be positive");
  }
  if (hold_min < 1 || hold_max < hold_min) {
    throw std::invalid_argument("hold bounds must satisfy 1 <= min <= max");
  }
  if (!(u1_lo <= u1_hi) || !(u2_lo <= u2_hi) || !(u3_lo <= u3_hi)) {
    throw std::invalid_argument("input bounds must satisfy lo <= hi");
  }
  if (sigma_noise < 0.0) {
    throw std::invalid_argument("sigma_noise must be >= 0");
  }
  if (!(scale_factor > 0.0)) {
    throw std::invalid_argument("scale_factor must be positive");
  }
  if (ridge < 0.0) {
    throw std::invalid_argument("ridge must be >= 0");
  }
}

DerivedSeeds derive_seeds(std::uint64_t master) {
  SplitMix64 rng(master);
  DerivedSeeds s;
  s.aprbs = rng.next();
  s.noise = rng.next();
  s.layer = rng.next();
  return s;
}

namespace {

long to_long(const std::string& v) {
  size_t used = 0;
  const long out = std::stol(v, &used);
  if (used != v.size()) {
    throw std::invalid_argument("bad integer value: " + v);
  }
  return out;
}

double to_double(const std::string& v) {
  size_t used = 0;
  const double out = std::stod(v, &used);
  if (used != v.size()) {
    throw std::invalid_argument("bad numeric value: " + v);
  }
  return out;
}

std::uint64_t to_u64(const std::string& v) {
  size_t used = 0;
  const unsigned long long out = std::stoull(v, &used);
  if (used != v.size()) {
    throw std::invalid_argument("bad unsigned value: " + v);
  }
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw std::invalid_argument("bad boolean value: " + v);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

void apply_key(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "task") c.task = value;
  else if (key == "trainer") c.trainer = value;
  else if (key == "activation") c.activation = value;
  else if (key == "hidden_dim") c.hidden_dim = static_cast<int>(to_long(value));
  else if (key == "ridge") c.ridge = to_double(value);
  else if (key == "gamma") c.gamma = to_double(value);
  else if (key == "scale_factor") c.scale_factor = to_double(value);
  else if (key == "weighted") c.weighted = to_bool(value);
  else if (key == "allow_unstable") c.allow_unstable = to_bool(value);
  else if (key == "init_size") c.init_size = to_long(value);
  else if (key == "input_lags") c.input_lags = static_cast<int>(to_long(value));
  else if (key == "output_lags") c.output_lags = static_cast<int>(to_long(value));
  else if (key == "horizon") c.horizon = to_long(value);
  else if (key == "scale") c.scale = to_double(value);
  else if (key == "length") c.length = to_long(value);
  else if (key == "seed") c.seed = to_u64(value);
  else if (key == "hold_min") c.hold_min = static_cast<int>(to_long(value));
  else if (key == "hold_max") c.hold_max = static_cast<int>(to_long(value));
  else if (key == "u1_lo") c.u1_lo = to_double(value);
  else if (key == "u1_hi") c.u1_hi = to_double(value);
  else if (key == "u2_lo") c.u2_lo = to_double(value);
  else if (key == "u2_hi") c.u2_hi = to_double(value);
  else if (key == "u3_lo") c.u3_lo = to_double(value);
  else if (key == "u3_hi") c.u3_hi = to_double(value);
  else if (key == "sigma_noise") c.sigma_noise = to_double(value);
  else if (key == "data_path") c.data_path = value;
  else if (key == "checkpoint_path") c.checkpoint_path = value;
  else if (key == "report_path") c.report_path = value;
  else if (key == "predictions_path") c.predictions_path = value;
  else throw std::invalid_argument("unknown config key: " + key);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "task",        "trainer",     "activation",      "hidden_dim",
      "ridge",       "gamma",       "scale_factor",    "weighted",
      "allow_unstable", "init_size", "input_lags",     "output_lags",
      "horizon",     "scale",       "length",          "seed",
      "hold_min",    "hold_max",    "u1_lo",           "u1_hi",
      "u2_lo",       "u2_hi",       "u3_lo",           "u3_hi",
      "sigma_noise", "data_path",   "checkpoint_path", "report_path",
      "predictions_path"};
  return keys;
}

void apply_config_text(RunConfig& config, const std::string& text) {
  std::string line;
  long line_no = 0;
  auto consume = [&](const std::string& raw) {
    ++line_no;
    std::string s = raw;
    const size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) return;
    const size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  " is not key=value");
    }
    apply_key(config, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  };
  for (char ch : text) {
    if (ch == '\n') {
      consume(line);
      line.clear();
    } else {
      line += ch;
    }
  }
  if (!line.empty()) consume(line);
}

void load_config_file(RunConfig& config, const std::string& path) {
  apply_config_text(config, read_text_file(path));
}

namespace {

struct Prepared {
  LabeledSeries series;
  Normalizer u_norm;
  Normalizer y_norm;
  Matrix u_normalized;
  Matrix y_normalized;
  SampleStream stream;   // regressors over normalized channels, full series
  Matrix task_targets;   // normalized y (identify) or labels (envelope)
  long train_rows;       // cycles in the training split
  long first_eval;       // stream index of the first eval sample

  long train_samples() const { return first_eval; }
  long eval_samples() const { return stream.size() - first_eval; }
};

Prepared prepare(const RunConfig& config, LabeledSeries series) {
  config.validate();
  const long t = series.length();
  const long train_rows = config.train_rows();
  if (t < train_rows) {
    throw std::invalid_argument(
        "data file has " + std::to_string(t) +
        " rows but the training split needs " + std::to_string(train_rows));
  }
  const long warmup = config.narx().warmup();
  if (train_rows <= warmup) {
    throw std::invalid_argument("training split shorter than the lag window");
  }
  Normalizer u_norm = Normalizer::fit(series.u_series.topRows(train_rows));
  Normalizer y_norm = Normalizer::fit(series.y_series.topRows(train_rows));
  Matrix u_normalized = u_norm.apply(series.u_series);
  Matrix y_normalized = y_norm.apply(series.y_series);
  SampleStream stream =
      build_regressors(u_normalized, y_normalized, series.labels,
                       config.narx());
  Matrix task_targets;
  if (config.is_identify()) {
    task_targets = stream.targets;
  } else {
    task_targets.resize(stream.size(), 1);
    for (long i = 0; i < stream.size(); ++i) {
      task_targets(i, 0) = stream.labels[static_cast<size_t>(i)];
    }
  }
  return Prepared{std::move(series),     std::move(u_norm),
                  std::move(y_norm),     std::move(u_normalized),
                  std::move(y_normalized), std::move(stream),
                  std::move(task_targets), train_rows,
                  train_rows - warmup};
}

double frobenius(const Matrix& m) { return m.norm(); }

WeightSpec split_weight_spec(const std::vector<int>& labels, long count,
                             double scale_factor) {
  long majority = 0;
  long minority = 0;
  for (long i = 0; i < count; ++i) {
    (labels[static_cast<size_t>(i)] == -1 ? minority : majority)++;
  }
  if (minority == 0) {
    throw std::invalid_argument(
        "weighted training needs minority samples in the training split");
  }
  WeightSpec spec;
  spec.imbalance_ratio =
      static_cast<double>(majority) / static_cast<double>(minority);
  spec.scale_factor = scale_factor;
  return spec;
}

TrainResult train_in_memory(const RunConfig& config, TrainerKind kind,
                            const Prepared& p) {
  const long n_train = p.train_samples();
  if (n_train < 1) {
    throw std::invalid_argument("no training samples");
  }
  const Matrix inputs = p.stream.inputs.topRows(n_train);
  const Matrix targets = p.task_targets.topRows(n_train);
  std::vector<int> labels(p.stream.labels.begin(),
                          p.stream.labels.begin() + n_train);
  const DerivedSeeds seeds = derive_seeds(config.seed);
  const int regressor_dim = static_cast<int>(inputs.cols());

  std::optional<Checkpoint> checkpoint;
  std::optional<StabilityVerdict> verdict;

  const auto t0 = std::chrono::steady_clock::now();
  if (kind == TrainerKind::linear) {
    Dataset data(inputs, targets,
                 config.weighted ? labels : std::vector<int>{});
    ElmModel model = config.weighted
                         ? batch_train_linear_weighted(
                               data, config.ridge,
                               split_weight_spec(labels, n_train,
                                                 config.scale_factor))
                         : batch_train_linear(data, config.ridge);
    checkpoint = Checkpoint{kind, std::move(model), std::nullopt,
                            std::nullopt};
  } else if (kind == TrainerKind::batch) {
    HiddenLayer layer(regressor_dim, config.resolved_hidden_dim(),
                      parse_activation(config.activation), seeds.layer);
    Dataset data(inputs, targets,
                 config.weighted ? labels : std::vector<int>{});
    ElmModel model =
        config.weighted
            ? batch_train_weighted(data, layer, config.ridge,
                                   split_weight_spec(labels, n_train,
                                                     config.scale_factor))
            : batch_train(data, layer, config.ridge);
    checkpoint = Checkpoint{kind, std::move(model), std::nullopt,
                            std::nullopt};
  } else {
    const long n0 = config.init_size;
    if (n_train < n0 + 1) {
      throw std::invalid_argument(
          "training split must exceed init_size; have " +
          std::to_string(n_train) + " samples, init_size " +
          std::to_string(n0));
    }
    HiddenLayer layer(regressor_dim, config.resolved_hidden_dim(),
                      parse_activation(config.activation), seeds.layer);
    Dataset chunk(inputs.topRows(n0), targets.topRows(n0));
    if (kind == TrainerKind::oselm) {
      if (config.weighted) {
        throw std::invalid_argument(
            "weighted updates are not defined for the RLS trainer");
      }
      OselmState state = OselmState::init(chunk, layer, config.ridge);
      for (long i = n0; i < n_train; ++i) {
        state.update(inputs.row(i).transpose(), targets.row(i).transpose());
      }
      ElmModel model = state.model();
      checkpoint =
          Checkpoint{kind, std::move(model), std::move(state), std::nullopt};
    } else {
      ElmModel w0 = batch_train(chunk, layer, config.ridge);
      SgelmState state(std::move(w0),
                       StepGain::scalar(config.resolved_gamma()),
                       config.scale_factor, config.allow_unstable);
      if (config.weighted) {
        std::uint64_t majority = 0;
        std::uint64_t minority = 0;
        for (long i = 0; i < n0; ++i) {
          (labels[static_cast<size_t>(i)] == -1 ? minority : majority)++;
        }
        state.set_counts(majority, minority);
        for (long i = n0; i < n_train; ++i) {
          state.update_weighted(inputs.row(i).transpose(),
                                targets.row(i).transpose(),
                                labels[static_cast<size_t>(i)]);
        }
      } else {
        for (long i = n0; i < n_train; ++i) {
          state.update(inputs.row(i).transpose(), targets.row(i).transpose());
        }
      }
      verdict = state.verdict();
      ElmModel model = state.model();
      checkpoint =
          Checkpoint{kind, std::move(model), std::nullopt, std::move(state)};
    }
  }
  const auto t1 = std::chrono::steady_clock::now();

  TrainResult result{kind,
                     std::chrono::duration<double>(t1 - t0).count(),
                     frobenius(checkpoint->active_model().output_weights()),
                     verdict,
                     std::move(*checkpoint),
                     Report{}};

  Report& r = result.report;
  r.add("command", "train");
  r.add("task", config.task);
  r.add("trainer", trainer_name(kind));
  r.add_count("data_rows", p.series.length());
  r.add_count("train_samples", n_train);
  r.add_count("init_size", kind == TrainerKind::oselm || kind == TrainerKind::sgelm
                               ? config.init_size
                               : 0);
  r.add_count("hidden_dim", kind == TrainerKind::linear
                                ? regressor_dim
                                : config.resolved_hidden_dim());
  r.add("activation",
        kind == TrainerKind::linear ? "linear" : config.activation);
  r.add_metric("ridge", config.ridge);
  r.add("weighted", config.weighted ? "1" : "0");
  if (kind == TrainerKind::sgelm) {
    r.add_metric("gamma", config.resolved_gamma());
    r.add_metric("scale_factor", config.scale_factor);
    r.add("verdict", stability_name(result.verdict->cls));
    r.add_metric("max_eigenvalue", result.verdict->max_eigenvalue);
  }
  r.add("seed", std::to_string(config.seed));
  r.add_metric("final_w_norm", result.w_norm);
  r.add_seconds("train_time_s", result.train_time_s);
  return result;
}

EvalResult evaluate_in_memory(const RunConfig& config, const Prepared& p,
                              TrainerKind kind, const ElmModel& model) {
  const long n_eval = p.eval_samples();
  if (n_eval < 1) {
    throw std::invalid_argument("no evaluation samples beyond the training split");
  }
  if (model.input_dim() != p.stream.inputs.cols()) {
    throw ShapeError("checkpoint expects " +
                     std::to_string(model.input_dim()) +
                     "-dimensional regressors, data provides " +
                     std::to_string(p.stream.inputs.cols()));
  }
  const int want_outputs = config.is_identify() ? 2 : 1;
  if (model.output_dim() != want_outputs) {
    throw ShapeError("checkpoint output dimension does not match the task");
  }
  const Matrix eval_inputs = p.stream.inputs.bottomRows(n_eval);

  EvalResult result;
  Report& r = result.report;
  r.add("command", "evaluate");
  r.add("task", config.task);
  r.add("trainer", trainer_name(kind));
  r.add_count("eval_samples", n_eval);

  if (config.is_identify()) {
    const Matrix scores = kernels::predict_all(model, eval_inputs);
    const Matrix raw_pred = p.y_norm.invert(scores);
    const Matrix raw_true = p.series.y_series.middleRows(p.train_rows, n_eval);
    result.osap_rmse = normalized_rmse(raw_true, raw_pred, p.y_norm);

    const long h = config.horizon;
    if (n_eval < h) {
      throw std::invalid_argument("evaluation split shorter than the horizon");
    }
    const long k0 = p.train_rows;
    const NarxConfig narx = config.narx();
    const Matrix u_seq =
        p.u_normalized.middleRows(k0 - narx.input_lags, h + narx.input_lags - 1);
    const Matrix y_seed =
        p.y_normalized.middleRows(k0 - narx.output_lags, narx.output_lags);
    const Matrix msap_norm = msap_predict(model, u_seq, y_seed, h, narx);
    const Matrix msap_raw = p.y_norm.invert(msap_norm);
    const Matrix msap_true = p.series.y_series.middleRows(k0, h);
    result.msap_rmse = normalized_rmse(msap_true, msap_raw, p.y_norm);

    r.add_metric("osap_rmse", result.osap_rmse);
    r.add_metric("msap_rmse", result.msap_rmse);
    r.add_count("horizon", h);

    std::string csv = "cycle,kind,y1_true,y2_true,y1_pred,y2_pred\n";
    for (long i = 0; i < n_eval; ++i) {
      const long cycle = p.train_rows + i;
      csv += std::to_string(cycle) + ",osap," +
             format_double(raw_true(i, 0)) + ',' +
             format_double(raw_true(i, 1)) + ',' +
             format_double(raw_pred(i, 0)) + ',' +
             format_double(raw_pred(i, 1)) + '\n';
    }
    for (long i = 0; i < h; ++i) {
      csv += std::to_string(k0 + i) + ",msap," +
             format_double(msap_true(i, 0)) + ',' +
             format_double(msap_true(i, 1)) + ',' +
             format_double(msap_raw(i, 0)) + ',' +
             format_double(msap_raw(i, 1)) + '\n';
    }
    result.predictions_csv = std::move(csv);
  } else {
    const Matrix scores = kernels::predict_all(model, eval_inputs);
    ConfusionCounts counts;
    std::string csv = "cycle,label,score,predicted\n";
    for (long i = 0; i < n_eval; ++i) {
      const int truth = p.stream.labels[static_cast<size_t>(p.first_eval + i)];
      const int predicted = scores(i, 0) >= 0.0 ? 1 : -1;
      counts.add(truth, predicted);
      csv += std::to_string(p.train_rows + i) + ',' + std::to_string(truth) +
             ',' + format_double(scores(i, 0)) + ',' +
             std::to_string(predicted) + '\n';
    }
    result.classification = imbalance_metrics(counts);
    result.predictions_csv = std::move(csv);
    r.add_metric("tpr", result.classification->tpr);
    r.add_metric("tnr", result.classification->tnr);
    r.add_metric("gm", result.classification->gm);
    r.add_metric("ta", result.classification->ta);
    r.add_count("eval_majority", static_cast<long long>(counts.positives()));
    r.add_count("eval_minority", static_cast<long long>(counts.negatives()));
  }
  return result;
}

}  // namespace

GenResult cmd_gen_data(const RunConfig& config) {
  config.validate();
  if (config.data_path.empty()) {
    throw std::invalid_argument("data_path is required");
  }
  const DerivedSeeds seeds = derive_seeds(config.seed);
  AprbsConfig aprbs;
  aprbs.channels = {{config.u1_lo, config.u1_hi},
                    {config.u2_lo, config.u2_hi},
                    {config.u3_lo, config.u3_hi}};
  aprbs.hold_min = config.hold_min;
  aprbs.hold_max = config.hold_max;
  aprbs.length = config.total_rows();
  aprbs.seed = seeds.aprbs;
  const Matrix u = generate_aprbs(aprbs);
  PlantConfig plant;
  plant.sigma_noise = config.sigma_noise;
  const LabeledSeries series = simulate_plant(plant, u, seeds.noise);
  write_series_csv(config.data_path, series);

  long minority = 0;
  for (int label : series.labels) {
    if (label == -1) ++minority;
  }
  GenResult result;
  result.rows = series.length();
  result.minority_fraction =
      static_cast<double>(minority) / static_cast<double>(series.length());
  Report& r = result.report;
  r.add("command", "gen-data");
  r.add("task", config.task);
  r.add_count("rows", result.rows);
  r.add_metric("minority_fraction", result.minority_fraction);
  r.add_metric("u1_lo", config.u1_lo);
  r.add_metric("u1_hi", config.u1_hi);
  r.add_count("hold_min", config.hold_min);
  r.add_count("hold_max", config.hold_max);
  r.add_metric("sigma_noise", config.sigma_noise);
  r.add("seed", std::to_string(config.seed));
  if (!config.report_path.empty()) {
    r.write(config.report_path);
  }
  return result;
}

TrainResult cmd_train(const RunConfig& config) {
  config.validate();
  if (config.data_path.empty()) {
    throw std::invalid_argument("data_path is required");
  }
  const Prepared p = prepare(config, read_series_csv(config.data_path));
  TrainResult result =
      train_in_memory(config, parse_trainer(config.trainer), p);
  if (!config.checkpoint_path.empty()) {
    const Checkpoint& cp = result.checkpoint;
    if (cp.oselm) {
      save_checkpoint(config.checkpoint_path, *cp.oselm);
    } else if (cp.sgelm) {
      save_checkpoint(config.checkpoint_path, *cp.sgelm);
    } else {
      save_checkpoint(config.checkpoint_path, cp.trainer, cp.model);
    }
  }
  if (!config.report_path.empty()) {
    result.report.write(config.report_path);
  }
  return result;
}

EvalResult cmd_evaluate(const RunConfig& config) {
  config.validate();
  if (config.data_path.empty() || config.checkpoint_path.empty()) {
    throw std::invalid_argument("data_path and checkpoint_path are required");
  }
  const Prepared p = prepare(config, read_series_csv(config.data_path));
  const Checkpoint cp = load_checkpoint(config.checkpoint_path);
  EvalResult result =
      evaluate_in_memory(config, p, cp.trainer, cp.active_model());
  if (!config.report_path.empty()) {
    result.report.write(config.report_path);
  }
  if (!config.predictions_path.empty()) {
    write_text_file(config.predictions_path, result.predictions_csv);
  }
  return result;
}

CompareResult cmd_compare(const RunConfig& config) {
  config.validate();
  if (config.data_path.empty()) {
    throw std::invalid_argument("data_path is required");
  }
  const Prepared p = prepare(config, read_series_csv(config.data_path));
  CompareResult result;
  char line[160];
  if (config.is_identify()) {
    result.table = "trainer      train_time_s    osap_rmse    msap_rmse\n";
  } else {
    result.table =
        "trainer      train_time_s          tpr          tnr           ta  "
        "         gm\n";
  }
  for (TrainerKind kind : {TrainerKind::linear, TrainerKind::batch,
                           TrainerKind::oselm, TrainerKind::sgelm}) {
    CompareRow row{kind, train_in_memory(config, kind, p), {}};
    row.eval = evaluate_in_memory(config, p, kind,
                                  row.train.checkpoint.active_model());
    if (config.is_identify()) {
      std::snprintf(line, sizeof(line), "%-12s %12s %12s %12s\n",
                    trainer_name(kind),
                    format_seconds(row.train.train_time_s).c_str(),
                    format_metric(row.eval.osap_rmse).c_str(),
                    format_metric(row.eval.msap_rmse).c_str());
    } else {
      const ImbalanceMetrics& m = *row.eval.classification;
      std::snprintf(line, sizeof(line), "%-12s %12s %12s %12s %12s %12s\n",
                    trainer_name(kind),
                    format_seconds(row.train.train_time_s).c_str(),
                    format_metric(m.tpr).c_str(), format_metric(m.tnr).c_str(),
                    format_metric(m.ta).c_str(), format_metric(m.gm).c_str());
    }
    result.table += line;
    result.rows.push_back(std::move(row));
  }
  if (!config.report_path.empty()) {
    write_text_file(config.report_path, result.table);
  }
  return result;
}

}  // namespace elmstream
