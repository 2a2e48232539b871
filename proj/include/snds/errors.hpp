#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace snds {

// Invalid configuration (bad estimator spec, malformed config file, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A gradient-based method was configured for a potential without one.
class GradientUnavailable : public ConfigError {
 public:
  explicit GradientUnavailable(const std::string& what) : ConfigError(what) {}
};

// The configured query budget was exhausted mid-run.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t consumed, std::uint64_t budget)
      : std::runtime_error(what), consumed(consumed), budget(budget) {}

  std::uint64_t consumed;
  std::uint64_t budget;
};

}  // namespace snds
