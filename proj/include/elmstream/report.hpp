#pragma once

#include <string>
#include <utility>
#include <vector>

namespace elmstream {

/// 6 significant digits, the precision used for metric values in reports.
std::string format_metric(double value);

/// Seconds with 4 decimals, the precision used for timings in reports.
std::string format_seconds(double value);

/// Ordered key=value report; renders one pair per line.
class Report {
 public:
  void add(const std::string& key, const std::string& value);
  void add_metric(const std::string& key, double value);
  void add_seconds(const std::string& key, double value);
  void add_count(const std::string& key, long long value);

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  std::string to_string() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace elmstream
