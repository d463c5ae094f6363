#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tsgd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand lengths or shapes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside its mathematical domain (q outside (0,1), t < 1, w < 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A computation produced a non-finite value.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::int64_t where)
      : Error(what), where_(where) {}

  // Offending coordinate (finite differences) or step index (models).
  std::int64_t where() const noexcept { return where_; }

 private:
  std::int64_t where_;
};

// Operation invoked on an object in the wrong state (e.g. empty buffer).
class StateError : public Error {
 public:
  using Error::Error;
};

// Ring buffer pushes must carry consecutive step indices.
class SequencingError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data. line() is 0 when not tied to a line.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IntegrityError : public DataError {
 public:
  using DataError::DataError;
};

class EmptySeriesError : public DataError {
 public:
  using DataError::DataError;
};

class RangeError : public DataError {
 public:
  using DataError::DataError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path)
      : Error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace tsgd
