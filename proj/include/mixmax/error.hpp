#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixmax {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(format(line, column, message)), line_(line), column_(column) {}

  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& message) {
    if (line == 0) return message;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

// A caller-supplied argument violates an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A configured resource cap (atom count, outcome count) would be exceeded.
class CapacityError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A mathematical invariant that must hold failed at runtime. Always a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace mixmax
