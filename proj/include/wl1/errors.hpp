#pragma once

#include <stdexcept>
#include <string>

namespace wl1 {

/// Bad caller input: shape mismatches, out-of-domain parameters, malformed files.
/// Maps to process exit code 1 in the CLI.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical breakdown on structurally valid input: singular Gram blocks,
/// diverging iterations, non-finite values. Maps to process exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wl1
