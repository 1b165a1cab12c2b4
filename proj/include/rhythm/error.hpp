#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace rhythm {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Index, year or window length outside the valid range.
class RangeError : public Error {
public:
  using Error::Error;
};

/// Two matrices (or a matrix and a profile) cover different year windows.
class AlignmentError : public Error {
public:
  using Error::Error;
};

/// Citations recorded for a window that has no publications.
class InconsistentDataError : public Error {
public:
  using Error::Error;
};

/// A subtraction produced a negative cell: the part is not contained in the whole.
class NotSubsetError : public Error {
public:
  using Error::Error;
};

/// Negative or otherwise impossible value.
class DomainError : public Error {
public:
  using Error::Error;
};

class ArgumentError : public Error {
public:
  using Error::Error;
};

class LookupError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// Malformed text input. Line and column are 1-based; 0 means "not known".
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line, std::size_t column, std::string source = {})
      : Error(position_prefix(source, line, column) + what), detail_(what), source_(std::move(source)),
        line_(line), column_(column) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }
  [[nodiscard]] const std::string &source() const noexcept { return source_; }
  /// The message without the position prefix.
  [[nodiscard]] const std::string &detail() const noexcept { return detail_; }

private:
  static std::string position_prefix(const std::string &source, std::size_t line, std::size_t column) {
    std::string p = source;
    if (line != 0) {
      p += (p.empty() ? "line " : ":") + std::to_string(line);
      if (column != 0) p += (source.empty() ? ", column " : ":") + std::to_string(column);
    }
    return p.empty() ? p : p + ": ";
  }

  std::string detail_;
  std::string source_;
  std::size_t line_;
  std::size_t column_;
};

/// Structurally wrong table: ragged rows, wrong header, value below the diagonal.
class LayoutError : public ParseError {
public:
  using ParseError::ParseError;
};

} // namespace rhythm
