#pragma once

#include <stdexcept>
#include <string>

namespace parrot {

/// Invalid scenario, routing parameters, or campaign configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace parrot
