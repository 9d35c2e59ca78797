#pragma once

// Non-interactive correlation distillation: two parties hold m-bit strings
// a and b, b being a through a binary symmetric channel with flip rate eps,
// and each applies a Boolean function locally hoping to agree on one bit.
//
// Correlation of (f, g) is E[(-1)^(f(a) xor g(b))] = 2 P(f(a) = g(b)) - 1.
// The search is over balanced functions (output bit uniform), since an
// output that is not a fair coin can agree trivially; constant f = g has
// correlation 1 at any noise level.
//
// Functions are truth tables: bit `a` of the table is f(a), where inputs use
// the project's big-endian convention (input bit 0 is the most significant).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace entangle::analysis {

inline constexpr std::size_t kMaxNicdBits = 4;
inline constexpr std::size_t kMaxExhaustiveBits = 3;

struct BooleanFunction {
  std::size_t m;
  std::uint32_t table;

  int operator()(std::uint32_t input) const { return static_cast<int>((table >> input) & 1u); }
  bool balanced() const;
  /// Index i when f(a) is input bit i, otherwise empty.
  std::optional<std::size_t> dictator_index() const;
  std::string describe() const;

  static BooleanFunction dictator(std::size_t m, std::size_t index);
};

/// All balanced functions of m inputs in increasing truth-table order.
std::vector<BooleanFunction> balanced_functions(std::size_t m);

/// Exact correlation and agreement of one pair by summation over every
/// (a, b) atom of the joint distribution.
double pair_correlation(const BooleanFunction& f, const BooleanFunction& g, double eps);
double pair_agreement(const BooleanFunction& f, const BooleanFunction& g, double eps);

struct NicdAchiever {
  BooleanFunction f;
  BooleanFunction g;
  bool matching_dictator;
  std::string description;
};

struct NicdResult {
  std::size_t m;
  double eps;
  double max_agreement;
  double max_correlation;
  NicdAchiever achiever;
  std::uint64_t search_size;  // (f, g) pairs examined
};

/// m <= 3: both functions enumerated. m == 4: f enumerated, g the best
/// balanced response (the half of outputs with the highest conditional
/// score get g = 0).
NicdResult nicd_max_correlation(std::size_t m, double eps);

struct CertificateRow {
  double eps;
  double bound;  // 1 - 2 eps
  NicdResult result;
  bool within_bound;
  bool dictator_attains;
};

struct NicdCertificate {
  std::size_t m;
  std::vector<CertificateRow> rows;
  bool certified;  // every row within the bound
};

/// Exhaustive check that no pair beats the single-bit dictator; m <= 3.
NicdCertificate nicd_no_improvement_certificate(std::size_t m, const std::vector<double>& eps_list);

}  // namespace entangle::analysis
