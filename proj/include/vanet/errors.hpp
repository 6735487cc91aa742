#pragma once

#include <stdexcept>
#include <string>

namespace vanet {

/// Invalid scenario, sweep or command-line configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Failure to read or write an artifact file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vanet
