#include "elmstream/data_csv.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "elmstream/serialize.hpp"

namespace elmstream {

std::string serialize_series(const LabeledSeries& series) {
  std::string out(kSeriesHeader);
  out += '\n';
  const long t = series.length();
  for (long k = 0; k < t; ++k) {
    out += std::to_string(k);
    for (long c = 0; c < 3; ++c) {
      out += ',';
      out += format_double(series.u_series(k, c));
    }
    for (long c = 0; c < 2; ++c) {
      out += ',';
      out += format_double(series.y_series(k, c));
    }
    out += ',';
    out += std::to_string(series.labels[static_cast<size_t>(k)]);
    out += '\n';
  }
  return out;
}

void write_series_csv(const std::string& path, const LabeledSeries& series) {
  write_text_file(path, serialize_series(series));
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += ch;
    }
  }
  out.push_back(field);
  return out;
}

double parse_field(const std::string& token, long line_no) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (token.empty() || end != begin + token.size() || !std::isfinite(v)) {
    throw CsvFormatError("bad numeric field '" + token + "'", line_no);
  }
  return v;
}

}  // namespace

LabeledSeries parse_series(const std::string& text) {
  std::vector<std::string> lines;
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
  if (lines.empty() || lines[0] != kSeriesHeader) {
    throw CsvFormatError("missing or wrong header; expected " +
                             std::string(kSeriesHeader),
                         1);
  }
  const long t = static_cast<long>(lines.size()) - 1;
  if (t < 1) {
    throw CsvFormatError("no data rows", 2);
  }
  LabeledSeries series;
  series.u_series.resize(t, 3);
  series.y_series.resize(t, 2);
  series.labels.resize(static_cast<size_t>(t));
  for (long k = 0; k < t; ++k) {
    const long line_no = k + 2;
    const std::vector<std::string> f = split_csv(lines[static_cast<size_t>(k + 1)]);
    if (f.size() != 7) {
      throw CsvFormatError("expected 7 fields, got " +
                               std::to_string(f.size()),
                           line_no);
    }
    char* end = nullptr;
    const long cycle = std::strtol(f[0].c_str(), &end, 10);
    if (f[0].empty() || end != f[0].c_str() + f[0].size() || cycle != k) {
      throw CsvFormatError("cycle field '" + f[0] + "' out of order", line_no);
    }
    for (long c = 0; c < 3; ++c) {
      series.u_series(k, c) = parse_field(f[static_cast<size_t>(1 + c)], line_no);
    }
    for (long c = 0; c < 2; ++c) {
      series.y_series(k, c) = parse_field(f[static_cast<size_t>(4 + c)], line_no);
    }
    const std::string& lab = f[6];
    if (lab == "1") {
      series.labels[static_cast<size_t>(k)] = 1;
    } else if (lab == "-1") {
      series.labels[static_cast<size_t>(k)] = -1;
    } else {
      throw CsvFormatError("label field '" + lab + "' must be 1 or -1",
                           line_no);
    }
  }
  return series;
}

LabeledSeries read_series_csv(const std::string& path) {
  return parse_series(read_text_file(path));
}

}  // namespace elmstream
