#pragma once

#include <stdexcept>
#include <string>

namespace hjsg
{
// Invalid user configuration (mapped to CLI exit code 2).
class ConfigError : public std::invalid_argument
{
public:
  explicit ConfigError(std::string const &what) : std::invalid_argument(what) {}
};

// Non-finite values detected in the numerical state (CLI exit code 3).
class NumericalFailure : public std::runtime_error
{
public:
  explicit NumericalFailure(std::string const &what) : std::runtime_error(what) {}
};

} // namespace hjsg
