#pragma once

#include <stdexcept>
#include <string>

namespace apsr {

/// Violation of a cluster-model contract (unknown host, dimension mismatch,
/// completing a request that is not placed). Distinct from a resolution
/// failure, which is an ordinary counted outcome.
class ModelError : public std::logic_error {
 public:
  explicit ModelError(const std::string& what) : std::logic_error(what) {}
};

/// Out-of-range argument to one of the probability routines.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Bad experiment, policy, or dataset configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace apsr
