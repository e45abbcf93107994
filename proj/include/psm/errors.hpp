#pragma once

#include <stdexcept>
#include <string>

namespace psm {

// Raised for invalid configuration or invalid user-supplied arguments.
// The CLI maps this to exit code 2 (usage error); everything else
// derived from std::runtime_error maps to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace psm
