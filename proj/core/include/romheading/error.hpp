#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace romheading {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (zero quaternion, empty stream, ...).
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// Not enough overlapping data to run a window-based estimate.
class InsufficientData : public Error {
public:
  using Error::Error;
};

/// Malformed configuration file or value.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Malformed data file. Carries the file, 1-based line, and 1-based column.
class ParseError : public Error {
public:
  ParseError(std::string file, std::size_t line, std::size_t column, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        file_(std::move(file)), line_(line), column_(column) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::string file_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace romheading
