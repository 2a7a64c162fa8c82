#pragma once

#include <stdexcept>
#include <string>

namespace sketchhs {

/// Bad arguments: dimension mismatches, out-of-range sizes, malformed files.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a valid result (failed
/// factorization, non-finite draw, degenerate conditional).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sketchhs
