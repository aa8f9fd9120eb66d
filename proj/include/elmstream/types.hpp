#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace elmstream {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dimension disagreement between an argument and the object consuming it.
class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// Normal matrix too close to singular to solve at the requested ridge.
class IllConditionedError : public std::runtime_error {
 public:
  IllConditionedError(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// Step-gain matrix rejected by the stability gate.
class StabilityError : public std::invalid_argument {
 public:
  explicit StabilityError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// A file could not be opened for reading or writing.
class FileError : public std::runtime_error {
 public:
  explicit FileError(const std::string& what) : std::runtime_error(what) {}
};

/// A data CSV row failed to parse; carries the 1-based line number.
class CsvFormatError : public std::runtime_error {
 public:
  CsvFormatError(const std::string& what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace elmstream
