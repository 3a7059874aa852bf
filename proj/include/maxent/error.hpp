#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxent {

/// Base class for all engine errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or invalid operation arguments.
struct ConfigError : Error {
  using Error::Error;
};

/// Expression text could not be parsed. `position` is a byte offset into
/// the input string.
struct ParseError : Error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos) : Error(what), position(pos) {}
};

/// Expression evaluation hit a domain violation (log of a nonpositive
/// value, division by zero, non-finite intermediate).
struct EvalError : Error {
  using Error::Error;
};

}  // namespace maxent
