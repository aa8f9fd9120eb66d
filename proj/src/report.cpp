#include "elmstream/report.hpp"

#include <cstdio>

#include "elmstream/serialize.hpp"

namespace elmstream {

std::string format_metric(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string format_seconds(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

void Report::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

void Report::add_metric(const std::string& key, double value) {
  add(key, format_metric(value));
}

void Report::add_seconds(const std::string& key, double value) {
  add(key, format_seconds(value));
}

void Report::add_count(const std::string& key, long long value) {
  add(key, std::to_string(value));
}

std::string Report::to_string() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

void Report::write(const std::string& path) const {
  write_text_file(path, to_string());
}

}  // namespace elmstream
