#pragma once

#include <stdexcept>
#include <string>

namespace lowsig {

/// Invalid configuration, geometry, or request (bad parameters, ROI out of
/// bounds, phantom outside the field of view). The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// The data itself cannot be processed (non-positive counts into the log,
/// missing wire signal, malformed grid file). The CLI maps it to exit code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lowsig
