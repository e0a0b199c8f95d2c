#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace germkit {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arity, index or shape mismatch between arguments.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// A component does not vanish at the origin.
class GermConditionError : public Error {
 public:
  using Error::Error;
};

/// An invariant that is not defined for the given input (e.g. order of the zero map).
class UndefinedInvariantError : public Error {
 public:
  using Error::Error;
};

/// A computation exceeded a configured resource bound.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A numeric iteration failed to converge.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace germkit
