#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nclid {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid argument to an operation (inactive node, empty set, size mismatch, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (zero bins, non-positive hyperparameters, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Embedding training could not start or continue (empty corpus, edgeless first snapshot).
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// A score or statistic is mathematically undefined for the given input.
class UndefinedError : public Error {
 public:
  using Error::Error;
};

}  // namespace nclid
