#include "entangle_coord/analysis/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace entangle::analysis {

double binary_entropy(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::domain_error("binary_entropy: eps must lie in [0, 1], got " + std::to_string(eps));
  }
  if (eps == 0.0 || eps == 1.0) return 0.0;
  return -eps * std::log2(eps) - (1.0 - eps) * std::log2(1.0 - eps);
}

BoundRow shannon_length_bound(double eps) {
  if (!(eps >= 0.0 && eps <= 0.5)) {
    throw std::domain_error("shannon_length_bound: eps must lie in [0, 0.5], got " + std::to_string(eps));
  }
  if (eps == 0.0) return {0.0, 0.0, std::numeric_limits<double>::infinity(), std::nullopt};
  const double h = binary_entropy(eps);
  const double raw = 1.0 / h;
  // Strictly below: an integral raw bound (e.g. 1 at eps = 0.5) is excluded.
  auto n = static_cast<std::int64_t>(std::ceil(raw)) - 1;
  return {eps, h, raw, n};
}

}  // namespace entangle::analysis
