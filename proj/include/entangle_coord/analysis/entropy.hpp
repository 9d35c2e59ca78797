#pragma once

#include <cstdint>
#include <optional>

namespace entangle::analysis {

/// H(eps) = -eps log2 eps - (1 - eps) log2 (1 - eps), with H(0) = H(1) = 0.
/// Throws std::domain_error outside [0, 1].
double binary_entropy(double eps);

/// Error-free string length limit n < 1 / H(eps) for one flip rate.
struct BoundRow {
  double eps;
  double entropy;
  double raw_bound;  // 1 / H(eps); +inf when unbounded
  // Largest integer strictly below raw_bound; empty when eps == 0.
  std::optional<std::int64_t> max_error_free_length;

  bool unbounded() const noexcept { return !max_error_free_length.has_value(); }
};

/// eps must lie in [0, 0.5]; eps == 0 yields an unbounded row.
BoundRow shannon_length_bound(double eps);

}  // namespace entangle::analysis
