#include "entangle_coord/adversary.hpp"

#include "entangle_coord/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace entangle::adversary {

namespace {

using protocol::AgentMemory;
using protocol::Bits;
using protocol::QubitRef;
using protocol::Registry;

constexpr qsim::Qubit kAttackerQubit = 0;
constexpr qsim::Qubit kAliceQubit = 1;
constexpr qsim::Qubit kBobQubit = 2;

enum class Party { Attacker, Alice, Bob };

void check_args(std::size_t n_bits, std::size_t trials) {
  if (n_bits < 1 || n_bits > protocol::kMaxBits) throw std::invalid_argument("n_bits must be in [1, 64]");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
}

double ratio(std::size_t num, std::size_t den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

// Every single-qubit cut of a three-qubit state is product.
bool fully_product(const qsim::PureState& s) {
  return qsim::is_product(s, {{0}, {1, 2}}).product && qsim::is_product(s, {{1}, {0, 2}}).product;
}

bool alice_bob_entangled(const qsim::PureState& s) {
  return !qsim::is_product(s, {{kAliceQubit}, {kAttackerQubit, kBobQubit}}).product;
}

struct TrialBits {
  Bits attacker;
  Bits alice;
  Bits bob;
};

// Called after the first party in the order has read every slot.
using AfterFirst = std::function<void(const Registry&, const TrialBits&)>;

// One substitution-attack trial: every action bit is carried by a triple
// copy of `triple`; Alice and Bob follow the honest protocol.
TrialBits substitution_trial(std::size_t n_bits, Rng& rng, const qsim::PureState& triple,
                             const std::array<Party, 3>& order, const AfterFirst& after_first) {
  Registry registry;
  AgentMemory alice{protocol::kAlice, {}};
  AgentMemory bob{protocol::kBob, {}};
  std::vector<QubitRef> attacker;
  for (std::size_t i = 0; i < n_bits; ++i) {
    const std::size_t entry = registry.add(triple);
    attacker.push_back({entry, kAttackerQubit});
    alice.slots.push_back({entry, kAliceQubit});
    bob.slots.push_back({entry, kBobQubit});
  }
  const auto pre = protocol::precommunicate(protocol::StrikeSet::canonical(n_bits), rng);
  const protocol::NoiseModel honest{};

  TrialBits out;
  for (std::size_t step = 0; step < order.size(); ++step) {
    switch (order[step]) {
      case Party::Attacker:
        for (const auto& ref : attacker) out.attacker.push_back(static_cast<std::uint8_t>(registry.measure(ref, rng)));
        break;
      case Party::Alice:
        out.alice = protocol::agent_measure(alice, pre.alice(), honest, registry, rng).bits;
        break;
      case Party::Bob:
        out.bob = protocol::agent_measure(bob, pre.bob(), honest, registry, rng).bits;
        break;
    }
    if (step == 0 && after_first) after_first(registry, out);
  }
  return out;
}

AttackReport make_report(AttackKind kind, std::size_t n_bits, std::size_t trials, std::uint64_t seed) {
  AttackReport r{kind, n_bits, trials, seed, {}, {}, {}, 0.0, 0.0, {}, std::nullopt};
  r.attacker_bits.reserve(trials);
  r.alice_bits.reserve(trials);
  r.bob_bits.reserve(trials);
  return r;
}

void record(AttackReport& r, TrialBits&& t, std::size_t& success, std::size_t& agree) {
  success += t.attacker == t.alice;
  agree += t.alice == t.bob;
  r.attacker_bits.push_back(std::move(t.attacker));
  r.alice_bits.push_back(std::move(t.alice));
  r.bob_bits.push_back(std::move(t.bob));
}

void finish(AttackReport& r, std::size_t success, std::size_t agree) {
  r.eavesdrop_success_rate = ratio(success, r.trials);
  r.agreement_rate = ratio(agree, r.trials);
}

// Per-bit agreement between the attacker and Alice, and between Alice and Bob.
void per_bit_rates(AttackReport& r) {
  std::size_t eve_alice = 0;
  std::size_t alice_bob = 0;
  for (std::size_t t = 0; t < r.trials; ++t) {
    for (std::size_t i = 0; i < r.n_bits; ++i) {
      eve_alice += r.attacker_bits[t][i] == r.alice_bits[t][i];
      alice_bob += r.alice_bits[t][i] == r.bob_bits[t][i];
    }
  }
  const std::size_t total = r.trials * r.n_bits;
  r.conditional_stats["bit_attacker_alice_agreement"] = ratio(eve_alice, total);
  r.conditional_stats["bit_alice_bob_agreement"] = ratio(alice_bob, total);
}

}  // namespace

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::GHZ: return "GHZ";
    case AttackKind::W: return "W";
    case AttackKind::Biseparable: return "Biseparable";
    case AttackKind::WolfCNOT: return "WolfCNOT";
  }
  throw InvariantViolation("unknown attack kind");
}

std::string AttackReport::attacker_name() const { return kind == AttackKind::WolfCNOT ? "wolf" : "eve"; }

AttackReport eve_ghz_attack(std::size_t n_bits, std::size_t trials, bool eve_first, std::uint64_t seed) {
  check_args(n_bits, trials);
  auto report = make_report(AttackKind::GHZ, n_bits, trials, seed);
  const auto ghz = qsim::prepare_ghz(3);
  const std::array<Party, 3> order = eve_first ? std::array{Party::Attacker, Party::Alice, Party::Bob}
                                               : std::array{Party::Alice, Party::Bob, Party::Attacker};
  std::size_t product_after_first = 0;
  std::size_t success = 0;
  std::size_t agree = 0;
  const AfterFirst check = [&](const Registry& reg, const TrialBits&) {
    for (std::size_t e = 0; e < reg.size(); ++e) product_after_first += fully_product(reg.state(e));
  };
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    record(report, substitution_trial(n_bits, rng, ghz, order, check), success, agree);
  }
  finish(report, success, agree);
  per_bit_rates(report);
  report.conditional_stats["pre_measurement_product_rate"] = fully_product(ghz) ? 1.0 : 0.0;
  report.conditional_stats["post_first_measurement_product_rate"] = ratio(product_after_first, trials * n_bits);
  return report;
}

AttackReport eve_w_attack(std::size_t n_bits, std::size_t trials, std::uint64_t seed) {
  check_args(n_bits, trials);
  auto report = make_report(AttackKind::W, n_bits, trials, seed);
  const auto w = qsim::prepare_w();
  std::size_t success = 0;
  std::size_t agree = 0;
  std::size_t entangled_after_eve1 = 0;
  std::size_t eve1_seen = 0;
  const AfterFirst check = [&](const Registry& reg, const TrialBits& bits) {
    for (std::size_t e = 0; e < reg.size(); ++e) {
      if (bits.attacker[e] == 1) {
        ++eve1_seen;
        entangled_after_eve1 += alice_bob_entangled(reg.state(e));
      }
    }
  };
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    record(report, substitution_trial(n_bits, rng, w, {Party::Attacker, Party::Alice, Party::Bob}, check),
           success, agree);
  }
  finish(report, success, agree);
  per_bit_rates(report);

  std::size_t eve0 = 0, both1_given0 = 0, eve1 = 0, differ_given1 = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < n_bits; ++i) {
      const int e = report.attacker_bits[t][i];
      const int a = report.alice_bits[t][i];
      const int b = report.bob_bits[t][i];
      if (e == 0) {
        ++eve0;
        both1_given0 += a == 1 && b == 1;
      } else {
        ++eve1;
        differ_given1 += a != b;
      }
    }
  }
  auto& stats = report.conditional_stats;
  stats["p_eve_0"] = ratio(eve0, trials * n_bits);
  if (eve0 > 0) stats["p_alice_bob_both_1_given_eve_0"] = ratio(both1_given0, eve0);
  if (eve1 > 0) {
    stats["p_alice_ne_bob_given_eve_1"] = ratio(differ_given1, eve1);
    stats["p_alice_bob_entangled_given_eve_1"] = ratio(entangled_after_eve1, eve1_seen);
  }
  return report;
}

AttackReport biseparable_attack(std::size_t n_bits, std::size_t trials, std::uint64_t seed) {
  check_args(n_bits, trials);
  auto report = make_report(AttackKind::Biseparable, n_bits, trials, seed);
  const auto state = qsim::prepare_biseparable();
  std::size_t success = 0;
  std::size_t agree = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    record(report, substitution_trial(n_bits, rng, state, {Party::Attacker, Party::Alice, Party::Bob}, {}),
           success, agree);
  }
  finish(report, success, agree);
  per_bit_rates(report);

  std::size_t eve1 = 0;
  std::array<std::size_t, 4> joint{};
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < n_bits; ++i) {
      eve1 += report.attacker_bits[t][i];
      ++joint[2 * report.alice_bits[t][i] + report.bob_bits[t][i]];
    }
  }
  const std::size_t total = trials * n_bits;
  auto& stats = report.conditional_stats;
  stats["p_eve_1"] = ratio(eve1, total);
  stats["p_alice_bob_00"] = ratio(joint[0], total);
  stats["p_alice_bob_01"] = ratio(joint[1], total);
  stats["p_alice_bob_10"] = ratio(joint[2], total);
  stats["p_alice_bob_11"] = ratio(joint[3], total);
  // E[(-1)^(eve xor alice)]; stays defined when Eve's bit is constant.
  stats["correlation_eve_alice"] = 2.0 * stats["bit_attacker_alice_agreement"] - 1.0;
  return report;
}

qsim::PureState wolf_triple(int target_bit) {
  if (target_bit != 0 && target_bit != 1) throw std::invalid_argument("target bit must be 0 or 1");
  const auto extended = qsim::tensor(qsim::prepare_bell(), qsim::basis_state(1, target_bit));
  return qsim::apply_cnot(extended, 1, 2);
}

AttackReport wolf_cnot_attack(std::size_t n_bits, std::size_t trials, int target_bit, std::uint64_t seed) {
  check_args(n_bits, trials);
  if (target_bit != 0 && target_bit != 1) throw std::invalid_argument("target bit must be 0 or 1");
  auto report = make_report(AttackKind::WolfCNOT, n_bits, trials, seed);
  const auto ghz = qsim::prepare_ghz(3);
  const auto ancilla = qsim::basis_state(1, target_bit);
  constexpr qsim::Qubit kAncilla = 2;

  double min_fidelity = 1.0;
  double max_deviation = 0.0;
  std::size_t success = 0;
  std::size_t agree = 0;
  std::size_t complement = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    auto dist = protocol::distribute_pairs(n_bits, rng);
    const auto pre = protocol::precommunicate(protocol::StrikeSet::canonical(n_bits), rng);
    auto& registry = dist.registry;
    const auto& bob_memory = dist.memories[protocol::kBob];

    // Temporary custody of Bob's memory.
    TrialBits bits;
    for (const auto& slot : bob_memory.slots) {
      registry.extend(slot.entry, ancilla);
      registry.cnot(slot.entry, slot.position, kAncilla);
      const auto& triple = registry.state(slot.entry);
      min_fidelity = std::min(min_fidelity, qsim::fidelity(ghz, triple));
      for (std::size_t k = 0; k < triple.dimension(); ++k) {
        max_deviation = std::max(max_deviation, std::abs(triple[k] - ghz[k]));
      }
      bits.attacker.push_back(static_cast<std::uint8_t>(registry.measure({slot.entry, kAncilla}, rng)));
    }
    const protocol::NoiseModel honest{};
    bits.alice = protocol::agent_measure(dist.memories[protocol::kAlice], pre.alice(), honest, registry, rng).bits;
    bits.bob = protocol::agent_measure(bob_memory, pre.bob(), honest, registry, rng).bits;

    Bits flipped = bits.attacker;
    for (auto& b : flipped) b ^= 1u;
    complement += flipped == bits.alice;
    record(report, std::move(bits), success, agree);
  }
  finish(report, success, agree);
  per_bit_rates(report);
  report.fidelity = min_fidelity;
  report.conditional_stats["ghz_fidelity_min"] = min_fidelity;
  report.conditional_stats["ghz_max_component_deviation"] = max_deviation;
  report.conditional_stats["complement_success_rate"] = ratio(complement, trials);
  return report;
}

}  // namespace entangle::adversary
