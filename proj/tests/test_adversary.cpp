#include <catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "entangle_coord/adversary.hpp"
#include "entangle_coord/qsim.hpp"

using namespace entangle;
using namespace entangle::adversary;
using qsim::PureState;

namespace {

// Joint law of (attacker, alice, bob) = qubits (0, 1, 2), obtained by
// chaining measurement_probabilities and collapse in the order 0, 1, 2.
using Joint = std::array<double, 8>;  // index 4 e + 2 a + b

Joint chain_oracle(const PureState& triple) {
  Joint joint{};
  for (int e = 0; e < 2; ++e) {
    const auto pe = qsim::measurement_probabilities(triple, 0);
    const double p_e = e ? pe.p1 : pe.p0;
    if (p_e < 1e-12) continue;
    const auto s1 = qsim::collapse(triple, 0, e).post_state;
    for (int a = 0; a < 2; ++a) {
      const auto pa = qsim::measurement_probabilities(s1, 1);
      const double p_a = a ? pa.p1 : pa.p0;
      if (p_a < 1e-12) continue;
      const auto s2 = qsim::collapse(s1, 1, a).post_state;
      const auto pb = qsim::measurement_probabilities(s2, 2);
      joint[4 * e + 2 * a] += p_e * p_a * pb.p0;
      joint[4 * e + 2 * a + 1] += p_e * p_a * pb.p1;
    }
  }
  return joint;
}

struct Analytic {
  double eve_alice;  // per bit
  double alice_bob;
};

Analytic analytic(const Joint& j) {
  Analytic r{0, 0};
  for (int idx = 0; idx < 8; ++idx) {
    const int e = idx >> 2, a = (idx >> 1) & 1, b = idx & 1;
    if (e == a) r.eve_alice += j[idx];
    if (a == b) r.alice_bob += j[idx];
  }
  return r;
}

// |observed - p| within 4 sigma; exact when p is 0 or 1.
void check_rate(double observed, double p, std::size_t n) {
  const double q = std::clamp(p, 0.0, 1.0);  // oracle sums can overshoot 1 by an ulp
  const double tol = 4.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(n)) + 1e-12;
  CHECK(std::abs(observed - p) <= tol);
}

void check_against_oracle(const AttackReport& r, const PureState& triple) {
  const auto p = analytic(chain_oracle(triple));
  const std::size_t bits = r.trials * r.n_bits;
  check_rate(r.conditional_stats.at("bit_attacker_alice_agreement"), p.eve_alice, bits);
  check_rate(r.conditional_stats.at("bit_alice_bob_agreement"), p.alice_bob, bits);
  check_rate(r.eavesdrop_success_rate, std::pow(p.eve_alice, r.n_bits), r.trials);
  check_rate(r.agreement_rate, std::pow(p.alice_bob, r.n_bits), r.trials);
}

}  // namespace

TEST_CASE("GHZ attack: Eve reads the action number", "[adversary]") {
  for (bool eve_first : {true, false}) {
    const auto r = eve_ghz_attack(8, 1000, eve_first, 3);
    CHECK(r.kind == AttackKind::GHZ);
    CHECK(r.attacker_name() == "eve");
    CHECK(r.eavesdrop_success_rate == 1.0);
    CHECK(r.agreement_rate == 1.0);
    CHECK(r.conditional_stats.at("pre_measurement_product_rate") == 0.0);
    CHECK(r.conditional_stats.at("post_first_measurement_product_rate") == 1.0);
    REQUIRE(r.attacker_bits.size() == 1000);
    for (std::size_t t = 0; t < r.trials; ++t) {
      REQUIRE(r.attacker_bits[t] == r.alice_bits[t]);
      REQUIRE(r.alice_bits[t] == r.bob_bits[t]);
    }
    check_against_oracle(r, qsim::prepare_ghz(3));
  }
}

TEST_CASE("GHZ remainder after Eve's measurement", "[adversary]") {
  for (int e = 0; e < 2; ++e) {
    const auto post = qsim::collapse(qsim::prepare_ghz(3), 0, e).post_state;
    CHECK(qsim::is_product(post, {{1}, {2}}).product);
    CHECK(qsim::measurement_probabilities(post, 1).p0 == (e ? 0.0 : 1.0));
    CHECK(qsim::measurement_probabilities(post, 2).p0 == (e ? 0.0 : 1.0));
  }
}

TEST_CASE("GHZ attack is perfect for every length and order", "[adversary][property]") {
  for (std::size_t n = 1; n <= 16; ++n) {
    for (bool eve_first : {true, false}) {
      CHECK(eve_ghz_attack(n, 50, eve_first, n).eavesdrop_success_rate == 1.0);
    }
  }
}

TEST_CASE("W attack splits the information", "[adversary]") {
  constexpr std::size_t trials = 100000;
  const auto r = eve_w_attack(1, trials, 3);
  const auto& s = r.conditional_stats;
  const double tol = 4.0 * std::sqrt((1.0 / 3) * (2.0 / 3) / trials);
  CHECK(std::abs(s.at("p_eve_0") - 1.0 / 3) <= tol);
  CHECK(s.at("p_alice_bob_both_1_given_eve_0") == 1.0);
  CHECK(s.at("p_alice_ne_bob_given_eve_1") == 1.0);
  CHECK(s.at("p_alice_bob_entangled_given_eve_1") == 1.0);
  CHECK(std::abs(r.agreement_rate - 1.0 / 3) <= tol);
  // per-trial: every event the conditionals describe
  for (std::size_t t = 0; t < trials; ++t) {
    if (r.attacker_bits[t][0] == 0) {
      REQUIRE(r.alice_bits[t][0] == 1);
      REQUIRE(r.bob_bits[t][0] == 1);
    } else {
      REQUIRE(r.alice_bits[t][0] != r.bob_bits[t][0]);
    }
  }
  check_against_oracle(r, qsim::prepare_w());
  check_against_oracle(eve_w_attack(3, 20000, 5), qsim::prepare_w());
}

TEST_CASE("biseparable attack leaves Eve uncorrelated", "[adversary]") {
  constexpr std::size_t trials = 20000;
  const auto r = biseparable_attack(1, trials, 3);
  const auto& s = r.conditional_stats;
  CHECK(s.at("p_eve_1") == 1.0);
  CHECK(s.at("p_alice_bob_00") == 0.0);
  CHECK(s.at("p_alice_bob_11") == 0.0);
  CHECK(s.at("p_alice_bob_01") + s.at("p_alice_bob_10") == Catch::Approx(1.0));
  CHECK(r.agreement_rate == 0.0);
  // correlation = 2 P(agree) - 1 has sd 2 sqrt(1/4 / n)
  CHECK(std::abs(s.at("correlation_eve_alice")) <= 4.0 * 2.0 * std::sqrt(0.25 / trials));
  for (std::size_t t = 0; t < trials; ++t) REQUIRE(r.alice_bits[t] != r.bob_bits[t]);
  check_against_oracle(r, qsim::prepare_biseparable());
}

TEST_CASE("Wolf's CNOT triple is GHZ", "[adversary]") {
  const auto triple = wolf_triple(0);
  const auto ghz = qsim::prepare_ghz(3);
  for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(triple[i] - ghz[i]) <= 1e-12);
  CHECK(qsim::fidelity(triple, ghz) == Catch::Approx(1.0).margin(1e-12));
  // target 1 gives (|001> + |110>)/sqrt2
  const auto flipped = wolf_triple(1);
  CHECK(std::abs(flipped[1]) == Catch::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(flipped[6]) == Catch::Approx(1 / std::sqrt(2.0)));
  CHECK_THROWS_AS(wolf_triple(2), std::invalid_argument);
}

TEST_CASE("Wolf attack reveals or complements the key", "[adversary]") {
  auto r = wolf_cnot_attack(8, 1000, 0, 3);
  CHECK(r.attacker_name() == "wolf");
  REQUIRE(r.fidelity.has_value());
  CHECK(*r.fidelity >= 1.0 - 1e-12);
  CHECK(r.conditional_stats.at("ghz_max_component_deviation") <= 1e-12);
  CHECK(r.eavesdrop_success_rate == 1.0);
  CHECK(r.agreement_rate == 1.0);
  for (std::size_t t = 0; t < r.trials; ++t) REQUIRE(r.attacker_bits[t] == r.alice_bits[t]);

  r = wolf_cnot_attack(8, 1000, 1, 3);
  CHECK(r.conditional_stats.at("complement_success_rate") == 1.0);
  CHECK(r.eavesdrop_success_rate == 0.0);
  for (std::size_t t = 0; t < r.trials; ++t) {
    for (std::size_t i = 0; i < 8; ++i) REQUIRE(r.attacker_bits[t][i] != r.alice_bits[t][i]);
  }
}

TEST_CASE("attack reports are deterministic", "[adversary][property]") {
  const auto same = [](const AttackReport& a, const AttackReport& b) {
    return a.attacker_bits == b.attacker_bits && a.alice_bits == b.alice_bits && a.bob_bits == b.bob_bits &&
           a.conditional_stats == b.conditional_stats && a.eavesdrop_success_rate == b.eavesdrop_success_rate;
  };
  CHECK(same(eve_ghz_attack(4, 200, false, 9), eve_ghz_attack(4, 200, false, 9)));
  CHECK(same(eve_w_attack(4, 200, 9), eve_w_attack(4, 200, 9)));
  CHECK(same(biseparable_attack(4, 200, 9), biseparable_attack(4, 200, 9)));
  CHECK(same(wolf_cnot_attack(4, 200, 0, 9), wolf_cnot_attack(4, 200, 0, 9)));
  CHECK_FALSE(same(eve_w_attack(4, 200, 9), eve_w_attack(4, 200, 10)));
}

TEST_CASE("attack argument checks", "[adversary]") {
  CHECK_THROWS_AS(eve_ghz_attack(0, 1, true, 1), std::invalid_argument);
  CHECK_THROWS_AS(eve_w_attack(1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(biseparable_attack(65, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(wolf_cnot_attack(1, 1, 3, 1), std::invalid_argument);
}
