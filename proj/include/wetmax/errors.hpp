#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wetmax {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or argument lies outside its documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Requested moment order is at or beyond the tail exponent.
class MomentNotFinite : public Error {
 public:
  using Error::Error;
};

/// A product representation was requested outside r, gamma in (0, 1].
class RepresentationDomainError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Base for failures of the estimators; the CLI maps these to exit code 3.
class EstimationError : public Error {
 public:
  using Error::Error;
};

class DegenerateSample : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class BracketingFailure : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class ZeroVariance : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class InvalidStart : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class NoOverdispersion : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class EmptySample : public EstimationError {
 public:
  using EstimationError::EstimationError;
};

class TauScanFailure : public EstimationError {
 public:
  TauScanFailure(std::string what, std::vector<std::pair<double, std::string>> failures)
      : EstimationError(std::move(what)), failures_(std::move(failures)) {}

  [[nodiscard]] const std::vector<std::pair<double, std::string>>& failures() const noexcept {
    return failures_;
  }

 private:
  std::vector<std::pair<double, std::string>> failures_;
};

/// Malformed input file. line() is 1-based, 0 when the whole file is at fault.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace wetmax
