#pragma once

#include <stdexcept>
#include <string>

namespace pharmap {

/// Bad run configuration (unknown key, missing file, out-of-range value).
/// The message always names the offending field.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure at run time (singular ODE denominator, failed factorization).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pharmap
