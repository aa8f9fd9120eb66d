#include "elmstream/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace elmstream {

const char* trainer_name(TrainerKind kind) {
  switch (kind) {
    case TrainerKind::batch:
      return "batch";
    case TrainerKind::linear:
      return "linear";
    case TrainerKind::oselm:
      return "oselm";
    case TrainerKind::sgelm:
      return "sgelm";
  }
  return "batch";
}

TrainerKind parse_trainer(const std::string& name) {
  if (name == "batch") return TrainerKind::batch;
  if (name == "linear") return TrainerKind::linear;
  if (name == "oselm") return TrainerKind::oselm;
  if (name == "sgelm") return TrainerKind::sgelm;
  throw std::invalid_argument("unknown trainer: " + name);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

constexpr const char* kHeader = "ELMSTREAM v1";
constexpr const char* kLinearToken = "linear";

void append_matrix(std::string& out, const Matrix& m) {
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ' ';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
}

struct LineReader {
  std::vector<std::string> lines;
  size_t pos = 0;

  explicit LineReader(const std::string& text) {
    std::string current;
    for (char ch : text) {
      if (ch == '\n') {
        lines.push_back(current);
        current.clear();
      } else {
        current += ch;
      }
    }
    if (!current.empty()) {
      lines.push_back(current);
    }
  }

  bool done() const { return pos >= lines.size(); }

  const std::string& next(const char* what) {
    if (done()) {
      throw FileError(std::string("unexpected end of file, expected ") + what);
    }
    return lines[pos++];
  }

  void expect_blank() {
    const std::string& line = next("blank separator line");
    if (!line.empty()) {
      throw FileError("expected blank separator line, got: " + line);
    }
  }
};

double parse_double(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + token.size() || token.empty()) {
    throw FileError("bad numeric value: " + token);
  }
  return v;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    out.push_back(tok);
  }
  return out;
}

Matrix parse_matrix(LineReader& reader, long rows, long cols,
                    const char* what) {
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    const std::vector<std::string> toks = split_ws(reader.next(what));
    if (static_cast<long>(toks.size()) != cols) {
      throw FileError(std::string("wrong value count in ") + what + " row");
    }
    for (long c = 0; c < cols; ++c) {
      m(r, c) = parse_double(toks[static_cast<size_t>(c)]);
    }
  }
  return m;
}

ElmModel parse_model_body(LineReader& reader) {
  if (reader.next("header") != kHeader) {
    throw FileError("missing ELMSTREAM v1 header");
  }
  const std::vector<std::string> dims = split_ws(reader.next("dimension line"));
  if (dims.size() != 5) {
    throw FileError("dimension line must hold: n n_h y_d activation seed");
  }
  const long n = std::strtol(dims[0].c_str(), nullptr, 10);
  const long n_h = std::strtol(dims[1].c_str(), nullptr, 10);
  const long y_d = std::strtol(dims[2].c_str(), nullptr, 10);
  const std::string& activation = dims[3];
  const std::uint64_t seed = std::strtoull(dims[4].c_str(), nullptr, 10);
  if (n < 1 || n_h < 1 || y_d < 1) {
    throw FileError("dimensions must be positive");
  }
  const Matrix w_r = parse_matrix(reader, n, n_h, "input weights");
  reader.expect_blank();
  const Matrix b_r = parse_matrix(reader, 1, n_h, "bias");
  reader.expect_blank();
  Matrix w = parse_matrix(reader, n_h, y_d, "output weights");
  if (activation == kLinearToken) {
    if (n != n_h) {
      throw FileError("linear model requires n_h == n");
    }
    return ElmModel::linear(static_cast<int>(n), std::move(w));
  }
  HiddenLayer layer = HiddenLayer::from_parts(
      parse_activation(activation), seed, w_r, b_r.row(0).transpose());
  return ElmModel(std::move(layer), std::move(w));
}

std::uint64_t parse_u64(const std::string& token) {
  if (token.empty()) {
    throw FileError("bad counter value");
  }
  char* end = nullptr;
  const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
  if (end != token.c_str() + token.size()) {
    throw FileError("bad counter value: " + token);
  }
  return v;
}

}  // namespace

std::string serialize_model(const ElmModel& model) {
  std::string out(kHeader);
  out += '\n';
  const long n = model.input_dim();
  const long n_h = model.feature_dim();
  const long y_d = model.output_dim();
  std::string activation = kLinearToken;
  std::uint64_t seed = 0;
  if (!model.is_linear()) {
    activation = activation_name(model.hidden()->activation());
    seed = model.hidden()->seed();
  }
  out += std::to_string(n) + ' ' + std::to_string(n_h) + ' ' +
         std::to_string(y_d) + ' ' + activation + ' ' + std::to_string(seed) +
         '\n';
  if (model.is_linear()) {
    append_matrix(out, Matrix::Identity(n, n));
    out += '\n';
    append_matrix(out, Matrix::Zero(1, n));
  } else {
    append_matrix(out, model.hidden()->weights());
    out += '\n';
    append_matrix(out, model.hidden()->bias().transpose());
  }
  out += '\n';
  append_matrix(out, model.output_weights());
  return out;
}

ElmModel parse_model(const std::string& text) {
  LineReader reader(text);
  ElmModel model = parse_model_body(reader);
  while (!reader.done()) {
    if (!reader.next("end of file").empty()) {
      throw FileError("trailing content after model");
    }
  }
  return model;
}

const ElmModel& Checkpoint::active_model() const {
  if (oselm) return oselm->model();
  if (sgelm) return sgelm->model();
  return model;
}

std::string serialize_checkpoint(TrainerKind kind, const ElmModel& model) {
  if (kind == TrainerKind::oselm || kind == TrainerKind::sgelm) {
    throw std::invalid_argument("streaming trainers need their state saved");
  }
  std::string out = serialize_model(model);
  out += '\n';
  out += std::string("TRAINER ") + trainer_name(kind) + '\n';
  return out;
}

std::string serialize_checkpoint(const OselmState& state) {
  std::string out = serialize_model(state.model());
  out += '\n';
  out += "TRAINER oselm\n";
  out += "SAMPLES " + std::to_string(state.samples_seen()) + '\n';
  append_matrix(out, state.covariance());
  return out;
}

std::string serialize_checkpoint(const SgelmState& state) {
  if (!state.gain().is_scalar()) {
    throw std::invalid_argument(
        "checkpoint format supports scalar step gains only");
  }
  std::string out = serialize_model(state.model());
  out += '\n';
  out += "TRAINER sgelm\n";
  out += "SAMPLES " + std::to_string(state.samples_seen()) + '\n';
  out += "GAIN " + format_double(state.gain().scalar_value()) + '\n';
  out += "SCALE " + format_double(state.scale_factor()) + '\n';
  out += "COUNTS " + std::to_string(state.majority_count()) + ' ' +
         std::to_string(state.minority_count()) + '\n';
  return out;
}

Checkpoint parse_checkpoint(const std::string& text) {
  LineReader reader(text);
  ElmModel model = parse_model_body(reader);
  reader.expect_blank();
  const std::vector<std::string> trainer_line =
      split_ws(reader.next("TRAINER line"));
  if (trainer_line.size() != 2 || trainer_line[0] != "TRAINER") {
    throw FileError("expected TRAINER line");
  }
  const TrainerKind kind = parse_trainer(trainer_line[1]);
  Checkpoint cp{kind, model, std::nullopt, std::nullopt};
  if (kind == TrainerKind::oselm) {
    const std::vector<std::string> samp = split_ws(reader.next("SAMPLES line"));
    if (samp.size() != 2 || samp[0] != "SAMPLES") {
      throw FileError("expected SAMPLES line");
    }
    const Matrix m = parse_matrix(reader, model.feature_dim(),
                                  model.feature_dim(), "covariance");
    cp.oselm = OselmState::from_parts(std::move(model), m, parse_u64(samp[1]));
  } else if (kind == TrainerKind::sgelm) {
    const std::vector<std::string> samp = split_ws(reader.next("SAMPLES line"));
    if (samp.size() != 2 || samp[0] != "SAMPLES") {
      throw FileError("expected SAMPLES line");
    }
    const std::vector<std::string> gain = split_ws(reader.next("GAIN line"));
    if (gain.size() != 2 || gain[0] != "GAIN") {
      throw FileError("expected GAIN line");
    }
    const std::vector<std::string> scale = split_ws(reader.next("SCALE line"));
    if (scale.size() != 2 || scale[0] != "SCALE") {
      throw FileError("expected SCALE line");
    }
    const std::vector<std::string> counts = split_ws(reader.next("COUNTS line"));
    if (counts.size() != 3 || counts[0] != "COUNTS") {
      throw FileError("expected COUNTS line");
    }
    cp.sgelm = SgelmState::from_parts(
        std::move(model), StepGain::scalar(parse_double(gain[1])),
        parse_double(scale[1]), parse_u64(counts[1]), parse_u64(counts[2]),
        parse_u64(samp[1]));
  }
  while (!reader.done()) {
    if (!reader.next("end of file").empty()) {
      throw FileError("trailing content after checkpoint");
    }
  }
  return cp;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw FileError("cannot open for writing: " + path);
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) {
    throw FileError("write failed: " + path);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FileError("cannot open for reading: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw FileError("read failed: " + path);
  }
  return buf.str();
}

void save_model(const std::string& path, const ElmModel& model) {
  write_text_file(path, serialize_model(model));
}

ElmModel load_model(const std::string& path) {
  return parse_model(read_text_file(path));
}

void save_checkpoint(const std::string& path, TrainerKind kind,
                     const ElmModel& model) {
  write_text_file(path, serialize_checkpoint(kind, model));
}

void save_checkpoint(const std::string& path, const OselmState& state) {
  write_text_file(path, serialize_checkpoint(state));
}

void save_checkpoint(const std::string& path, const SgelmState& state) {
  write_text_file(path, serialize_checkpoint(state));
}

Checkpoint load_checkpoint(const std::string& path) {
  return parse_checkpoint(read_text_file(path));
}

}  // namespace elmstream
