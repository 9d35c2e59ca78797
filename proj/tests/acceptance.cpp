// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "entangle_coord/adversary.hpp"
#include "entangle_coord/analysis/entropy.hpp"
#include "entangle_coord/analysis/nicd.hpp"
#include "entangle_coord/analysis/reconcile.hpp"
#include "entangle_coord/cli.hpp"
#include "entangle_coord/protocol.hpp"
#include "entangle_coord/qsim.hpp"
#include "entangle_coord/random.hpp"

using namespace entangle;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Verdict()>& body) {
  const auto t0 = Clock::now();
  Verdict v{false, ""};
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = elapsed < limit_s;
  const bool pass = v.ok && in_time;
  failures += !pass;
  std::printf("%s %2d %s: %s; %.3f s (limit %g s)%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              v.detail.c_str(), elapsed, limit_s, in_time ? "" : " TIMEOUT");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Independent evaluation: largest integer k with k H(eps) < 1, long double.
long long oracle_length(long double eps) {
  const long double h = -(eps * std::log2(eps) + (1 - eps) * std::log2(1 - eps));
  long long k = 0;
  while ((k + 1) * h < 1.0L) ++k;
  return k;
}

double four_sigma(double p, double n) { return 4.0 * std::sqrt(p * (1 - p) / n); }

// Direct summation over (a, noise pattern) for truth tables f, g.
double oracle_corr(unsigned f, unsigned g, int m, double eps) {
  double total = 0.0;
  for (int a = 0; a < (1 << m); ++a) {
    for (int z = 0; z < (1 << m); ++z) {
      const int d = __builtin_popcount(static_cast<unsigned>(z));
      const double p = std::pow(eps, d) * std::pow(1 - eps, m - d) / (1 << m);
      total += (((f >> a) & 1u) == ((g >> (a ^ z)) & 1u) ? p : -p);
    }
  }
  return total;
}

std::string cli_out(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  if (cli::run(args, out, err) != 0) throw std::runtime_error("cli failed: " + err.str());
  return out.str();
}

}  // namespace

int main() {
  const auto suite_start = Clock::now();

  // The two bound criteria time one library evaluation.
  for (auto [id, eps, expected, stated_limit] : {std::tuple{1, 1e-4, 678LL, 700LL}, std::tuple{2, 0.01, 12LL, 13LL}}) {
    const long long oracle = oracle_length(eps);
    criterion(id, "length bound at eps=" + fmt("%g", eps), 1e-3, [&] {
      const auto row = analysis::shannon_length_bound(eps);
      const long long got = row.max_error_free_length.value_or(-1);
      return Verdict{got == expected && got == oracle && got < stated_limit,
                     "max_error_free_length " + std::to_string(got) + ", oracle " + std::to_string(oracle) +
                         ", stated limit < " + std::to_string(stated_limit)};
    });
  }

  constexpr int kRuns = 100000;
  std::vector<std::uint64_t> first_bits;
  criterion(3, "Bell correlation over 1e5 runs", 2.0, [&] {
    int disagreements = 0;
    first_bits.reserve(kRuns);
    for (int i = 0; i < kRuns; ++i) {
      const auto r = protocol::run_protocol(1, {}, derive_seed(7, i));
      disagreements += !(r.agree && r.alice_bits == r.bob_bits);
      first_bits.push_back(r.alice_bits[0]);
    }
    return Verdict{disagreements == 0, "trials disagreeing " + std::to_string(disagreements) + " of 100000"};
  });

  criterion(4, "50-50 randomness", 2.0, [&] {
    int zeros = 0;
    for (auto b : first_bits) zeros += b == 0;
    const double freq = zeros / double(first_bits.size());
    return Verdict{first_bits.size() == kRuns && std::abs(freq - 0.5) <= 0.01,
                   fmt("bit-0 frequency %.5f (target 0.5 +- 0.01)", freq)};
  });

  criterion(5, "GHZ attack", 2.0, [] {
    const auto first = adversary::eve_ghz_attack(8, 1000, true, 3);
    const auto last = adversary::eve_ghz_attack(8, 1000, false, 3);
    bool separable = true;
    bool correlated = true;
    for (int e = 0; e < 2; ++e) {
      const auto post = qsim::collapse(qsim::prepare_ghz(3), 0, e).post_state;
      separable = separable && qsim::is_product(post, {{1}, {2}}).product;
      correlated = correlated && qsim::measurement_probabilities(post, 1).p0 == (e ? 0.0 : 1.0) &&
                   qsim::measurement_probabilities(post, 2).p0 == (e ? 0.0 : 1.0);
    }
    const double sep_rate = std::min(first.conditional_stats.at("post_first_measurement_product_rate"),
                                     last.conditional_stats.at("post_first_measurement_product_rate"));
    return Verdict{first.eavesdrop_success_rate == 1.0 && last.eavesdrop_success_rate == 1.0 && separable &&
                       correlated && sep_rate == 1.0,
                   fmt("success eve-first %g, eve-last %g, separable-after-first-measurement rate %g",
                       first.eavesdrop_success_rate, last.eavesdrop_success_rate, sep_rate)};
  });

  criterion(6, "W attack", 3.0, [] {
    const auto r = adversary::eve_w_attack(1, kRuns, 3);
    const auto& s = r.conditional_stats;
    const double p0 = s.at("p_eve_0");
    const bool ok = std::abs(p0 - 1.0 / 3) <= 0.006 && s.at("p_alice_bob_both_1_given_eve_0") == 1.0 &&
                    s.at("p_alice_ne_bob_given_eve_1") == 1.0 && std::abs(r.agreement_rate - 1.0 / 3) <= 0.006;
    return Verdict{ok, fmt("P(eve=0) %.5f, agreement %.5f, ", p0, r.agreement_rate) +
                           fmt("P(a=b=1|e=0) %g, P(a!=b|e=1) %g", s.at("p_alice_bob_both_1_given_eve_0"),
                               s.at("p_alice_ne_bob_given_eve_1"))};
  });

  criterion(7, "Wolf attack", 1.0, [] {
    const auto triple = adversary::wolf_triple(0);
    const auto ghz = qsim::prepare_ghz(3);
    double dev = 0.0;
    for (std::size_t i = 0; i < 8; ++i) dev = std::max(dev, std::abs(triple[i] - ghz[i]));
    const auto r = adversary::wolf_cnot_attack(8, 1000, 0, 3);
    const double run_dev = r.conditional_stats.at("ghz_max_component_deviation");
    return Verdict{dev <= 1e-12 && run_dev <= 1e-12 && r.eavesdrop_success_rate == 1.0,
                   fmt("max amplitude deviation %g (in runs %g), wolf == alice rate %g", dev, run_dev,
                       r.eavesdrop_success_rate)};
  });

  criterion(8, "NICD no-improvement certificate", 60.0, [] {
    bool ok = true;
    double worst = 0.0;
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto c = analysis::nicd_no_improvement_certificate(m, {0.05, 0.1, 0.25});
      for (const auto& row : c.rows) {
        const double gap = std::abs(row.result.max_correlation - (1 - 2 * row.eps));
        worst = std::max(worst, gap);
        ok = ok && gap <= 1e-9 && row.dictator_attains && row.result.achiever.matching_dictator;
      }
      ok = ok && c.certified;
    }
    return Verdict{ok, fmt("largest |max - (1 - 2 eps)| %g over m in {1,2,3}", worst)};
  });

  criterion(9, "NICD oracle equivalence", 5.0, [] {
    bool ok = true;
    double worst = 0.0;
    for (int m = 1; m <= 2; ++m) {
      for (double eps : {0.0, 0.05, 0.1, 0.25, 0.5}) {
        double best = -2.0;
        for (unsigned f = 0; f < (1u << (1 << m)); ++f) {
          if (2 * __builtin_popcount(f) != (1 << m)) continue;
          for (unsigned g = 0; g < (1u << (1 << m)); ++g) {
            if (2 * __builtin_popcount(g) != (1 << m)) continue;
            best = std::max(best, oracle_corr(f, g, m, eps));
          }
        }
        const auto r = analysis::nicd_max_correlation(static_cast<std::size_t>(m), eps);
        const double achieved = oracle_corr(r.achiever.f.table, r.achiever.g.table, m, eps);
        worst = std::max({worst, std::abs(r.max_correlation - best), std::abs(achieved - best)});
        ok = ok && std::abs(r.max_correlation - best) <= 1e-14 && std::abs(achieved - best) <= 1e-14;
      }
    }
    return Verdict{ok, fmt("largest deviation from oracle %g", worst)};
  });

  criterion(10, "misalignment law", 5.0, [] {
    bool ok = true;
    std::string detail;
    for (double theta : {std::numbers::pi / 8, std::numbers::pi / 4, std::numbers::pi / 2}) {
      protocol::NoiseModel noise;
      noise.misalign_bob = theta;
      int disagree = 0;
      for (int i = 0; i < kRuns; ++i) disagree += !protocol::run_protocol(1, noise, derive_seed(10, i)).agree;
      const double p = std::pow(std::sin(theta / 2), 2);
      const double freq = disagree / double(kRuns);
      ok = ok && std::abs(freq - p) <= four_sigma(p, kRuns);
      if (!detail.empty()) detail += ", ";
      detail += fmt("theta %.4f: %.5f vs sin^2 %.5f", theta, freq, p);
    }
    return Verdict{ok, detail};
  });

  criterion(11, "reconciliation n=64 eps=0.01", 5.0, [] {
    protocol::NoiseModel noise;
    noise.flip_prob = 0.01;
    int ok_runs = 0;
    double leaked = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const auto run = protocol::run_protocol(64, noise, derive_seed(9, s));
      const auto r = analysis::reconcile(run.alice_bits, run.bob_bits, 0.01, derive_seed(run.seed, 1));
      ok_runs += r.success;
      leaked += r.disclosed_bits / 64.0;
    }
    const double rate = ok_runs / 1000.0;
    const double per_bit = leaked / 1000.0;
    const double h = analysis::binary_entropy(0.01);
    return Verdict{rate >= 0.99 && per_bit >= h,
                   fmt("success %.3f, disclosed/n %.4f, H(0.01) %.4f", rate, per_bit, h)};
  });

  criterion(12, "determinism of every subcommand", 120.0, [&] {
    const std::vector<std::vector<std::string>> cmds = {
        {"run", "--bits", "8", "--trials", "1000", "--eps", "0.05", "--seed", "1", "--records"},
        {"run", "--agents", "4", "--bits", "3", "--trials", "500", "--seed", "1", "--format", "csv"},
        {"attack", "ghz", "--bits", "8", "--trials", "1000", "--seed", "3", "--records"},
        {"attack", "w", "--bits", "1", "--trials", "10000", "--seed", "3"},
        {"attack", "biseparable", "--bits", "2", "--trials", "1000", "--seed", "3"},
        {"attack", "wolf", "--bits", "4", "--trials", "100", "--target-bit", "0", "--seed", "3"},
        {"bound", "--grid", "1e-6:0.5:50", "--log"},
        {"nicd", "--m", "3", "--eps", "0.05,0.1,0.25"},
        {"reconcile", "--bits", "64", "--eps", "0.01", "--trials", "1000", "--seed", "9"},
    };
    std::size_t identical = 0;
    for (const auto& c : cmds) identical += cli_out(c) == cli_out(c);
    const double total = std::chrono::duration<double>(Clock::now() - suite_start).count();
    return Verdict{identical == cmds.size() && total < 120.0,
                   std::to_string(identical) + "/" + std::to_string(cmds.size()) +
                       " invocation pairs byte-identical; acceptance suite total " + fmt("%.2f s", total)};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
