#pragma once

#include <string>

#include "elmstream/plant.hpp"

namespace elmstream {

inline constexpr const char* kSeriesHeader = "cycle,u1,u2,u3,y1,y2,label";

/// Renders the series in the data CSV format: the header above, one row per
/// cycle, floats with 17 significant digits, label 1 or -1.
std::string serialize_series(const LabeledSeries& series);
void write_series_csv(const std::string& path, const LabeledSeries& series);

/// Strict parse of the data CSV format. Cycles must be 0..T-1 in order;
/// any malformed line raises CsvFormatError carrying its 1-based number.
LabeledSeries parse_series(const std::string& text);
LabeledSeries read_series_csv(const std::string& path);

}  // namespace elmstream
