#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smash {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed Matrix Market / edge-list input. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An encoded matrix or container file violates the encoding invariants.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// Synchronous fault raised by a BMU instruction.
class BmuFault : public Error {
 public:
  using Error::Error;
};

}  // namespace smash
