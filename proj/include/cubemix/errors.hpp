#pragma once

#include <stdexcept>
#include <string>

namespace cubemix {

// Instance too large for the requested dense/exhaustive computation.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Operation requires an exchangeable update law.
class NotExchangeableError : public std::domain_error {
 public:
  explicit NotExchangeableError(const std::string& what) : std::domain_error(what) {}
};

// Parameters outside the regime where a bound or formula is valid.
class RegimeError : public std::domain_error {
 public:
  explicit RegimeError(const std::string& what) : std::domain_error(what) {}
};

// Distance curve never reached the target within the search ceiling
// (periodic or reducible configuration).
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user-supplied configuration; message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cubemix
