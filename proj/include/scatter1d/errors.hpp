#pragma once

#include <stdexcept>
#include <string>

namespace scatter1d {

// Bad input: a violated precondition or a malformed spec.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// A computation that could not deliver a trustworthy number
// (overflow, non-convergence, step underflow).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scatter1d
