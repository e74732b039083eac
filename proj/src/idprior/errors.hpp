#pragma once

#include <stdexcept>
#include <string>

namespace idprior {

// Invalid user input (bad parameter, malformed config, size mismatch).
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical diagnostic failure (ESS guard, underflow, factorization failure).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace idprior
