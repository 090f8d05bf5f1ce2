#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpmf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Data unusable for the requested operation (missing class, too few samples...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Vector/matrix shapes that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The optimizer could not make progress or produced a non-finite value.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpmf
