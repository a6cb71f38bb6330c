#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cellkit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Syntax error in formula text. `position` is a byte offset into the input.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position(position) {}
  std::size_t position;
};

/// Unknown names, malformed model files, invalid partitions, bad arguments.
struct ModelError : Error {
  using Error::Error;
};

/// A brute-force routine was asked to exceed its size guard.
struct LimitError : Error {
  using Error::Error;
};

}  // namespace cellkit
