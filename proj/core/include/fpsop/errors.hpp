#pragma once

#include <stdexcept>
#include <string>

namespace fpsop {

/// Bad user-supplied data: non-positive weights, p < 1, delta_0 != 1, unknown presets.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested build exceeds the storage guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fpsop
