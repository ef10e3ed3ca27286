#pragma once

#include <stdexcept>
#include <string>

namespace qgalloy {

// Invalid arguments or malformed input data.
struct InputError : std::invalid_argument {
  explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Requested feature is outside the supported family (e.g. assembling
// general (A,B) vertex conditions).
struct CapabilityError : std::runtime_error {
  explicit CapabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Result would be numerically untrustworthy (energy above the mesh
// validity ceiling, factorization breakdown after retry).
struct AccuracyError : std::runtime_error {
  explicit AccuracyError(const std::string& msg) : std::runtime_error(msg) {}
};

// Problem size exceeds a configured cap.
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qgalloy
