#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stlf {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the documented domain of an operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Feature columns cannot be aligned with the target series.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

/// A statistic is undefined for the given data (zero variance, zero target).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

/// Model inputs do not match the columns the model was trained on.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. The message always carries "path:line: ".
class IngestError : public Error {
 public:
  IngestError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), path_(path), line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

/// Invalid run configuration; the CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace stlf
