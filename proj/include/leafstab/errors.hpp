#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace leafstab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Division by zero, non-exact division where exactness was required.
struct ArithmeticError : Error {
  using Error::Error;
};

/// Operands live on different charts, or a variable is not on the chart.
struct ChartError : Error {
  using Error::Error;
};

/// Precondition violation on degrees, shapes or structural assumptions.
struct DomainError : Error {
  using Error::Error;
};

/// A numerical decision (rank, evaluation domain) could not be made reliably.
struct NumericError : Error {
  using Error::Error;
};

/// Malformed manifest; the message names the line, section and key.
struct ManifestError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset(offset) {}
  std::size_t offset;
};

}  // namespace leafstab
