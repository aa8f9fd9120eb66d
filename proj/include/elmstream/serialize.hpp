#pragma once

#include <optional>
#include <string>

#include "elmstream/elm_model.hpp"
#include "elmstream/online.hpp"
#include "elmstream/types.hpp"

namespace elmstream {

enum class TrainerKind { batch, linear, oselm, sgelm };

const char* trainer_name(TrainerKind kind);
TrainerKind parse_trainer(const std::string& name);

/// 17-significant-digit decimal form; round-trips any finite double exactly.
std::string format_double(double value);

/// Plain-text model format: header line "ELMSTREAM v1", a dimension line
/// "n n_h y_d activation seed", then W_r, b_r, W as row-major decimals with
/// 17 significant digits, one matrix row per line, blank line between
/// matrices. The linear baseline uses activation token "linear" with an
/// identity W_r and zero b_r.
std::string serialize_model(const ElmModel& model);
ElmModel parse_model(const std::string& text);
void save_model(const std::string& path, const ElmModel& model);
ElmModel load_model(const std::string& path);

/// Checkpoint: the model format plus a TRAINER line and, for the streaming
/// trainers, a STATE section (covariance M for RLS; gain, scale factor and
/// class counters for the gradient trainer).
struct Checkpoint {
  TrainerKind trainer;
  ElmModel model;
  std::optional<OselmState> oselm;
  std::optional<SgelmState> sgelm;

  const ElmModel& active_model() const;
};

std::string serialize_checkpoint(TrainerKind kind, const ElmModel& model);
std::string serialize_checkpoint(const OselmState& state);
std::string serialize_checkpoint(const SgelmState& state);
Checkpoint parse_checkpoint(const std::string& text);

void save_checkpoint(const std::string& path, TrainerKind kind,
                     const ElmModel& model);
void save_checkpoint(const std::string& path, const OselmState& state);
void save_checkpoint(const std::string& path, const SgelmState& state);
Checkpoint load_checkpoint(const std::string& path);

/// Writes text to path, throwing FileError on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace elmstream
