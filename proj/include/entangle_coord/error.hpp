#pragma once

#include <stdexcept>
#include <string>

namespace entangle {

// Raised when an internal consistency check fails (a bug, not bad input).
// Bad input is reported with std::invalid_argument / std::out_of_range.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace entangle
