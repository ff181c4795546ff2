#pragma once

#include <stdexcept>
#include <string>

namespace pdclass {

// File and format problems (missing file, malformed CSV/JSON).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Domain invariant violations (bad signal values, label mismatches).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures (e.g. solver non-convergence).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pdclass
