#pragma once

// Two-pass block-parity reconciliation over an authenticated, error-free
// classical channel. Alice's string is the reference; Bob flips bits.
//
// Pass 1 splits the string into consecutive blocks of k1 bits, compares
// block parities, and bisects every mismatching block (one disclosed parity
// per halving) to find and flip one error. Pass 2 repeats on a seeded
// permutation of the positions with blocks of 2 k1.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "entangle_coord/protocol.hpp"

namespace entangle::analysis {

struct ReconcileOptions {
  // Overrides the first-pass block size (still clamped to the string length).
  std::optional<std::size_t> first_block_size;
};

struct ReconcileReport {
  std::size_t n;
  std::size_t errors_before;
  std::size_t errors_after;
  std::size_t disclosed_bits;  // parities revealed; the final check is not counted
  std::size_t passes;
  bool success;
  protocol::Bits alice;
  protocol::Bits bob_corrected;
};

/// k1 = max(2, round(0.73 / eps_hint)), capped at max(2, n / 16) so short
/// strings still get enough blocks to expose even error counts, then clamped
/// to n.
std::size_t first_block_size(std::size_t n, double eps_hint);

ReconcileReport reconcile(const protocol::Bits& alice, const protocol::Bits& bob, double eps_hint,
                          std::uint64_t seed, const ReconcileOptions& options = {});

}  // namespace entangle::analysis
