#include "entangle_coord/analysis/reconcile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>

#include "entangle_coord/random.hpp"

namespace entangle::analysis {

namespace {

using protocol::Bits;

int parity(const Bits& bits, std::span<const std::size_t> positions) {
  int p = 0;
  for (auto i : positions) p ^= bits[i];
  return p;
}

class Session {
 public:
  Session(const Bits& alice, Bits bob) : alice_(alice), bob_(std::move(bob)) {}

  // One pass over `order` in consecutive blocks of `block` positions.
  void pass(std::span<const std::size_t> order, std::size_t block) {
    for (std::size_t start = 0; start < order.size(); start += block) {
      const auto blk = order.subspan(start, std::min(block, order.size() - start));
      if (disclose_mismatch(blk)) bisect(blk);
    }
  }

  std::size_t disclosed() const noexcept { return disclosed_; }
  Bits take_bob() { return std::move(bob_); }

 private:
  bool disclose_mismatch(std::span<const std::size_t> positions) {
    ++disclosed_;
    return parity(alice_, positions) != parity(bob_, positions);
  }

  // Block known to hold an odd number of errors: halve until one position.
  void bisect(std::span<const std::size_t> blk) {
    while (blk.size() > 1) {
      const auto first = blk.first(blk.size() / 2);
      blk = disclose_mismatch(first) ? first : blk.subspan(first.size());
    }
    bob_[blk.front()] ^= 1u;
  }

  const Bits& alice_;
  Bits bob_;
  std::size_t disclosed_ = 0;
};

std::size_t count_errors(const Bits& a, const Bits& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

}  // namespace

std::size_t first_block_size(std::size_t n, double eps_hint) {
  if (!(eps_hint > 0.0 && eps_hint <= 0.5)) throw std::invalid_argument("eps_hint must lie in (0, 0.5]");
  if (n == 0) throw std::invalid_argument("cannot reconcile empty strings");
  const auto cascade = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(0.73 / eps_hint)));
  const std::size_t cap = std::max<std::size_t>(2, n / 16);
  return std::min({cascade, cap, n});
}

ReconcileReport reconcile(const Bits& alice, const Bits& bob, double eps_hint, std::uint64_t seed,
                          const ReconcileOptions& options) {
  if (alice.size() != bob.size()) throw std::invalid_argument("reconcile: strings differ in length");
  const std::size_t n = alice.size();
  std::size_t k1 = first_block_size(n, eps_hint);
  if (options.first_block_size) {
    if (*options.first_block_size == 0) throw std::invalid_argument("block size must be positive");
    k1 = std::min(*options.first_block_size, n);
  }
  const std::size_t k2 = std::min(2 * k1, n);

  Session session(alice, bob);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  session.pass(order, k1);

  Rng rng(seed);
  for (std::size_t j = n - 1; j > 0; --j) std::swap(order[j], order[rng.below(j + 1)]);
  session.pass(order, k2);

  ReconcileReport report{n, count_errors(alice, bob), 0, session.disclosed(), 2, false, alice, session.take_bob()};
  report.errors_after = count_errors(report.alice, report.bob_corrected);
  report.success = report.errors_after == 0;
  return report;
}

}  // namespace entangle::analysis
