#pragma once

#include <stdexcept>
#include <string>

namespace confinv {

// Thrown for invalid user input (bad expression text, malformed surface spec,
// out-of-range arguments). The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a numeric precondition fails at run time (singular Jacobian,
// inversion center on the surface, log of a non-positive jet, ...).
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace confinv
