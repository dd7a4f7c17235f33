#pragma once

#include <stdexcept>
#include <string>

namespace ferryline {

/// Bad configuration or experiment spec (CLI exit code 1).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad or unusable input data (CLI exit code 2).
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace ferryline
