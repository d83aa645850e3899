#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rigor {

/// Base of every error the toolkit throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interval construction or arithmetic outside the supported domain
/// (NaN endpoints, lo > hi, arithmetic on semi-infinite operands).
class IntervalError : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroInterval : public Error {
 public:
  DivisionByZeroInterval() : Error("division by an interval containing zero") {}
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `position` is a byte offset for single-line input
/// and `line` a 1-based line number for file input (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position, std::size_t line = 0)
      : Error(what), position_(position), line_(line) {}

  std::size_t position() const noexcept { return position_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t position_;
  std::size_t line_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace rigor
