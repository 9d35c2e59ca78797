#pragma once

// Attack scenarios against the correlated-action protocol. Each trial is a
// full protocol run (distribution, precommunication, both agents measuring)
// with a third party holding or manufacturing an extra qubit per action bit.
//
// The attacker's qubit is position 0 of every triple for the substitution
// attacks; Alice holds position 1 and Bob position 2.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entangle_coord/protocol.hpp"

namespace entangle::adversary {

enum class AttackKind { GHZ, W, Biseparable, WolfCNOT };

std::string to_string(AttackKind kind);

struct AttackReport {
  AttackKind kind;
  std::size_t n_bits;
  std::size_t trials;
  std::uint64_t seed;
  std::vector<protocol::Bits> attacker_bits;  // serialized as eve_bits or wolf_bits
  std::vector<protocol::Bits> alice_bits;
  std::vector<protocol::Bits> bob_bits;
  double eavesdrop_success_rate;  // attacker string == Alice's string
  double agreement_rate;          // Alice's string == Bob's string
  std::map<std::string, double> conditional_stats;
  // Wolf only: smallest |<GHZ|constructed triple>|^2 over all triples.
  std::optional<double> fidelity;

  std::string attacker_name() const;
};

/// Eve substitutes GHZ triples and keeps qubit 0. With `eve_first` she reads
/// her qubits before Alice and Bob, otherwise after them.
AttackReport eve_ghz_attack(std::size_t n_bits, std::size_t trials, bool eve_first, std::uint64_t seed);

/// Eve substitutes (weight-two) W triples and measures first.
AttackReport eve_w_attack(std::size_t n_bits, std::size_t trials, std::uint64_t seed);

/// Eve substitutes |1> (x) (|01> + |10>)/sqrt2 and holds the unentangled qubit.
AttackReport biseparable_attack(std::size_t n_bits, std::size_t trials, std::uint64_t seed);

/// Wolf borrows Bob's memory, CNOTs each of Bob's qubits onto a fresh
/// ancilla |target_bit>, and reads the ancillas before returning the memory.
AttackReport wolf_cnot_attack(std::size_t n_bits, std::size_t trials, int target_bit, std::uint64_t seed);

/// One Wolf triple: Bell pair (Alice, Bob) with an ancilla appended and
/// Bob's qubit used as CNOT control. Qubit order is Alice, Bob, ancilla.
qsim::PureState wolf_triple(int target_bit);

}  // namespace entangle::adversary
