#pragma once

#include <stdexcept>

namespace hswd {

/// Bad or inconsistent experiment configuration; message carries the field path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File could not be read/written or has a malformed layout.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Training produced a non-finite loss or gradient.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hswd
