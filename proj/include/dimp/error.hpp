#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dimp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad count, unknown node, empty input).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. `line()` is 1-based, 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An update batch or collection refers to a different graph snapshot.
class StaleBatchError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive oracle asked to enumerate more edges than it supports.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dimp
