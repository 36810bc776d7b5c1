#pragma once

#include <stdexcept>
#include <string>

namespace anatomy {

/// A machine description that is not a valid epsilon-machine (non-unifilar,
/// unnormalized, or not strongly connected).
class InvalidModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation whose cost would exceed its configured budget.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A provably nonnegative quantity came out clearly negative, or an internal
/// identity failed beyond floating-point noise.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline constexpr double kNegativeSlack = 1e-9;

/// Clamps cancellation noise in [-1e-9, 0) to zero; anything lower is a bug.
inline double clamp_nonnegative(double value, const char* what) {
  if (value >= 0.0) return value;
  if (value < -kNegativeSlack) {
    throw ConsistencyError(std::string(what) + " is negative: " + std::to_string(value));
  }
  return 0.0;
}

}  // namespace detail
}  // namespace anatomy
