#include "entangle_coord/analysis/nicd.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace entangle::analysis {

namespace {

constexpr double kTieTolerance = 1e-12;

void check_m(std::size_t m, std::size_t limit) {
  if (m < 1 || m > limit) {
    throw std::invalid_argument("substring length m must be in [1, " + std::to_string(limit) + "]");
  }
}

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 0.5)) throw std::invalid_argument("eps must lie in [0, 0.5]");
}

std::uint32_t inputs(std::size_t m) { return std::uint32_t{1} << m; }

// eps^d (1 - eps)^(m - d) for d = 0..m, i.e. the channel probability of one
// specific flip pattern of weight d.
std::vector<double> pattern_weights(std::size_t m, double eps) {
  std::vector<double> w(m + 1);
  for (std::size_t d = 0; d <= m; ++d) {
    w[d] = std::pow(eps, static_cast<double>(d)) * std::pow(1.0 - eps, static_cast<double>(m - d));
  }
  return w;
}

// Distance spectrum of a pair: for each Hamming distance d, the signed sum
// over (a, b) at that distance of (-1)^(f(a) xor g(b)), and the number of
// such atoms where f(a) == g(b). Integers, so exact.
struct Spectrum {
  std::array<long, kMaxNicdBits + 1> signed_sum{};
  std::array<long, kMaxNicdBits + 1> agree{};
};

Spectrum spectrum(const BooleanFunction& f, const BooleanFunction& g) {
  Spectrum s;
  const std::uint32_t n = inputs(f.m);
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = 0; b < n; ++b) {
      const auto d = static_cast<std::size_t>(std::popcount(a ^ b));
      const bool same = f(a) == g(b);
      s.signed_sum[d] += same ? 1 : -1;
      s.agree[d] += same;
    }
  }
  return s;
}

double evaluate(const std::array<long, kMaxNicdBits + 1>& counts, const std::vector<double>& w, std::size_t m) {
  double total = 0.0;
  for (std::size_t d = 0; d <= m; ++d) total += static_cast<double>(counts[d]) * w[d];
  return total / static_cast<double>(inputs(m));
}

NicdAchiever make_achiever(const BooleanFunction& f, const BooleanFunction& g) {
  const auto fi = f.dictator_index();
  const bool matching = fi.has_value() && fi == g.dictator_index();
  std::string description = "f = " + f.describe() + ", g = " + g.describe();
  if (matching) description += " (matching dictator)";
  return {f, g, matching, std::move(description)};
}

// Prefer a matching dictator among pairs tying the maximum.
NicdResult finalize(std::size_t m, double eps, double best, const BooleanFunction& f, const BooleanFunction& g,
                    std::uint64_t search_size) {
  BooleanFunction af = f;
  BooleanFunction ag = g;
  for (std::size_t i = 0; i < m; ++i) {
    const auto d = BooleanFunction::dictator(m, i);
    if (pair_correlation(d, d, eps) >= best - kTieTolerance) {
      af = d;
      ag = d;
      break;
    }
  }
  const double agreement = pair_agreement(af, ag, eps);
  return {m, eps, agreement, best, make_achiever(af, ag), search_size};
}

NicdResult exhaustive(std::size_t m, double eps, const std::vector<BooleanFunction>& funcs) {
  const auto w = pattern_weights(m, eps);
  double best = -2.0;
  std::size_t best_f = 0;
  std::size_t best_g = 0;
  for (std::size_t i = 0; i < funcs.size(); ++i) {
    for (std::size_t j = 0; j < funcs.size(); ++j) {
      const double c = evaluate(spectrum(funcs[i], funcs[j]).signed_sum, w, m);
      if (c > best + kTieTolerance) {
        best = c;
        best_f = i;
        best_g = j;
      }
    }
  }
  return finalize(m, eps, best, funcs[best_f], funcs[best_g],
                  static_cast<std::uint64_t>(funcs.size()) * funcs.size());
}

// For fixed f, the balanced g maximizing correlation sets g(b) = 0 on the
// half of inputs b with the largest conditional score sum_a P(a, b)(-1)^f(a).
NicdResult best_response(std::size_t m, double eps, const std::vector<BooleanFunction>& funcs) {
  const std::uint32_t n = inputs(m);
  const auto w = pattern_weights(m, eps);
  std::vector<double> score(n);
  std::vector<std::uint32_t> order(n);
  double best = -2.0;
  BooleanFunction best_f{m, 0};
  BooleanFunction best_g{m, 0};
  for (const auto& f : funcs) {
    for (std::uint32_t b = 0; b < n; ++b) {
      double s = 0.0;
      for (std::uint32_t a = 0; a < n; ++a) {
        s += (f(a) ? -1.0 : 1.0) * w[static_cast<std::size_t>(std::popcount(a ^ b))];
      }
      score[b] = s / static_cast<double>(n);
    }
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return score[x] > score[y]; });
    std::uint32_t g_table = 0;
    double c = 0.0;
    for (std::uint32_t k = 0; k < n; ++k) {
      if (k < n / 2) {
        c += score[order[k]];
      } else {
        c -= score[order[k]];
        g_table |= std::uint32_t{1} << order[k];
      }
    }
    if (c > best + kTieTolerance) {
      best = c;
      best_f = f;
      best_g = BooleanFunction{m, g_table};
    }
  }
  return finalize(m, eps, best, best_f, best_g, funcs.size());
}

}  // namespace

bool BooleanFunction::balanced() const {
  const std::uint32_t n = inputs(m);
  return static_cast<std::uint32_t>(std::popcount(table & ((1u << n) - 1u))) == n / 2;
}

std::optional<std::size_t> BooleanFunction::dictator_index() const {
  for (std::size_t i = 0; i < m; ++i) {
    if (table == dictator(m, i).table) return i;
  }
  return std::nullopt;
}

std::string BooleanFunction::describe() const {
  if (auto i = dictator_index()) return "x" + std::to_string(*i);
  std::ostringstream os;
  os << "table 0x" << std::hex << table;
  return os.str();
}

BooleanFunction BooleanFunction::dictator(std::size_t m, std::size_t index) {
  if (index >= m) throw std::out_of_range("dictator index out of range");
  std::uint32_t table = 0;
  for (std::uint32_t a = 0; a < inputs(m); ++a) {
    if ((a >> (m - 1 - index)) & 1u) table |= std::uint32_t{1} << a;
  }
  return {m, table};
}

std::vector<BooleanFunction> balanced_functions(std::size_t m) {
  check_m(m, kMaxNicdBits);
  std::vector<BooleanFunction> out;
  const std::uint64_t count = std::uint64_t{1} << inputs(m);
  for (std::uint64_t t = 0; t < count; ++t) {
    BooleanFunction f{m, static_cast<std::uint32_t>(t)};
    if (f.balanced()) out.push_back(f);
  }
  return out;
}

double pair_correlation(const BooleanFunction& f, const BooleanFunction& g, double eps) {
  if (f.m != g.m) throw std::invalid_argument("functions take different input lengths");
  check_m(f.m, kMaxNicdBits);
  check_eps(eps);
  return evaluate(spectrum(f, g).signed_sum, pattern_weights(f.m, eps), f.m);
}

double pair_agreement(const BooleanFunction& f, const BooleanFunction& g, double eps) {
  if (f.m != g.m) throw std::invalid_argument("functions take different input lengths");
  check_m(f.m, kMaxNicdBits);
  check_eps(eps);
  return evaluate(spectrum(f, g).agree, pattern_weights(f.m, eps), f.m);
}

NicdResult nicd_max_correlation(std::size_t m, double eps) {
  check_m(m, kMaxNicdBits);
  check_eps(eps);
  const auto funcs = balanced_functions(m);
  return m <= kMaxExhaustiveBits ? exhaustive(m, eps, funcs) : best_response(m, eps, funcs);
}

NicdCertificate nicd_no_improvement_certificate(std::size_t m, const std::vector<double>& eps_list) {
  check_m(m, kMaxExhaustiveBits);
  if (eps_list.empty()) throw std::invalid_argument("certificate needs at least one eps");
  NicdCertificate cert{m, {}, true};
  for (double eps : eps_list) {
    auto result = nicd_max_correlation(m, eps);
    const double bound = 1.0 - 2.0 * eps;
    const bool within = result.max_correlation <= bound + 1e-9;
    const auto d = BooleanFunction::dictator(m, 0);
    const bool attains = pair_correlation(d, d, eps) >= result.max_correlation - kTieTolerance;
    cert.certified = cert.certified && within;
    cert.rows.push_back({eps, bound, std::move(result), within, attains});
  }
  return cert;
}

}  // namespace entangle::analysis
