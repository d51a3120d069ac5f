#pragma once

#include <stdexcept>

namespace monobell {

/// Malformed input: bad scenario, out-of-range index, invalid file contents.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation refused to start because its size guard would be exceeded.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace monobell
