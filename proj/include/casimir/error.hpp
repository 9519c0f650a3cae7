#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace casimir {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: unreadable file, malformed row, invalid parameter.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : InputError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

/// Argument outside the domain where an operation is defined.
class RangeError : public InputError {
 public:
  using InputError::InputError;
};

/// Numerical failure: quadrature or iteration did not converge.
class ComputeError : public Error {
 public:
  using Error::Error;
};

}  // namespace casimir
