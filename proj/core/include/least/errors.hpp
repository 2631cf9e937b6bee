#pragma once

#include <stdexcept>
#include <string>

namespace least {

// Shapes or indices that do not fit the object they are applied to.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A loss, gradient or input that is NaN or infinite. Raised before any state
// is mutated so the caller can dump diagnostics and abort cleanly.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration, layout or snapshot file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace least
