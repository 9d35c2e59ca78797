#pragma once

// The correlated-action protocol: a controller prepares entangled states,
// hands one qubit of each to every field agent, two issuers precommunicate
// per-agent action tables, and the agents later measure locally to obtain a
// shared binary action number that selects one strike out of 2^n_bits.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "entangle_coord/qsim.hpp"
#include "entangle_coord/random.hpp"

namespace entangle::protocol {

using Bits = std::vector<std::uint8_t>;

inline constexpr std::size_t kMaxBits = 64;
inline constexpr const char* kAmbiguousStrike = "ambiguous";

/// "0110"-style rendering, bit 0 first.
std::string to_string(const Bits& bits);
Bits bits_from_string(const std::string& text);

/// Big-endian: bit 0 is the most significant bit. Requires size <= 64.
std::uint64_t action_number(const Bits& bits);

/// Agents are numbered; 0 is Alice and 1 is Bob.
using AgentIndex = std::size_t;
inline constexpr AgentIndex kAlice = 0;
inline constexpr AgentIndex kBob = 1;

std::string agent_name(AgentIndex agent);
/// Carl issues Alice's table and Dave issues Bob's; extra agents in the
/// multi-agent variant get issuers of their own.
std::string issuer_name(AgentIndex agent);

/// The 2^n_bits strike labels. Either explicit, or the canonical
/// "strike-<index>" family, which is never materialized (n_bits may be 64).
class StrikeSet {
 public:
  StrikeSet(std::size_t n_bits, std::vector<std::string> labels);
  static StrikeSet canonical(std::size_t n_bits);

  std::size_t n_bits() const noexcept { return n_bits_; }
  /// 2^n_bits - 1
  std::uint64_t last_index() const noexcept;
  std::string label(std::uint64_t index) const;

 private:
  explicit StrikeSet(std::size_t n_bits);
  std::size_t n_bits_;
  std::vector<std::string> labels_;  // empty for the canonical set
};

/// strike_of(action_number, strikes) -> labels[action_number]
std::string strike_of(std::uint64_t action_number, const StrikeSet& strikes);

struct ActionTable {
  AgentIndex agent;
  std::string issuer;
  // entries[i][b]: what to do when bit position i comes out as b.
  std::vector<std::array<std::string, 2>> entries;

  std::size_t n_bits() const noexcept { return entries.size(); }
  std::vector<std::string> actions_for(const Bits& bits) const;
};

/// Headquarters' private link from executed actions back to a strike. Only
/// the union of every agent's decoded bits, plus the ordered StrikeSet,
/// names a strike.
class StrikeCodebook {
 public:
  StrikeCodebook(std::vector<ActionTable> tables, StrikeSet strikes);

  /// Decodes each agent's actions; returns the strike when all agents'
  /// action numbers coincide, kAmbiguousStrike otherwise.
  std::string resolve(const std::vector<std::vector<std::string>>& actions_per_agent) const;

  const StrikeSet& strikes() const noexcept { return strikes_; }

 private:
  std::vector<ActionTable> tables_;
  StrikeSet strikes_;
};

struct Precommunication {
  std::vector<ActionTable> tables;  // tables[agent]
  StrikeCodebook codebook;

  const ActionTable& alice() const { return tables.at(kAlice); }
  const ActionTable& bob() const { return tables.at(kBob); }
};

/// Draws fresh opaque tokens for every (agent, bit position, outcome).
Precommunication precommunicate(const StrikeSet& strikes, Rng& rng, std::size_t num_agents = 2);

/// What an issuer can infer holding a single table: the agent's action
/// number (the table inverts the tokens) but not the strike, since the
/// number-to-strike ordering stays with headquarters. Candidates are every
/// label in the unordered target list.
struct IssuerInference {
  std::uint64_t action_number;
  std::vector<std::string> candidates;
};
IssuerInference issuer_view(const ActionTable& table, const std::vector<std::string>& actions,
                            const std::vector<std::string>& unordered_targets);

/// Location of one qubit: entry in the registry, position in that state.
struct QubitRef {
  std::size_t entry;
  qsim::Qubit position;

  friend bool operator==(const QubitRef&, const QubitRef&) = default;
};

struct AgentMemory {
  AgentIndex agent;
  std::vector<QubitRef> slots;  // slot i feeds bit i of the action number
};

/// Independent entangled states, one per action bit, plus per-qubit
/// bookkeeping of which qubits have already been read out.
class Registry {
 public:
  std::size_t add(qsim::PureState state);
  std::size_t size() const noexcept { return states_.size(); }
  const qsim::PureState& state(std::size_t entry) const { return states_.at(entry); }

  bool measured(QubitRef ref) const;
  void rotate(QubitRef ref, double theta);
  /// Projective Sigma-basis measurement; throws std::logic_error when the
  /// qubit was already measured.
  int measure(QubitRef ref, Rng& rng);

  /// Appends `ancilla` qubits after the entry's existing ones.
  void extend(std::size_t entry, const qsim::PureState& ancilla);
  void cnot(std::size_t entry, qsim::Qubit control, qsim::Qubit target);

 private:
  void check(QubitRef ref) const;
  std::vector<qsim::PureState> states_;
  std::vector<std::vector<bool>> measured_;
};

struct Distribution {
  Registry registry;
  std::vector<AgentMemory> memories;  // memories[agent]
};

/// n_bits k-qubit GHZ states (Bell pairs for k = 2); for every state the
/// agent-to-qubit assignment is a uniformly random permutation.
Distribution distribute(std::size_t num_agents, std::size_t n_bits, Rng& rng);

/// Two-party case: n_bits Bell pairs.
Distribution distribute_pairs(std::size_t n_bits, Rng& rng);

struct NoiseModel {
  double flip_prob = 0.0;       // classical outcome flip, applied to one carrier
  double misalign_alice = 0.0;  // frame rotation (radians) before measuring
  double misalign_bob = 0.0;
  AgentIndex noise_carrier = kBob;

  void validate() const;
  double misalignment(AgentIndex agent) const;
};

struct MeasuredActions {
  Bits bits;
  std::vector<std::string> actions;
};

/// Rotate, measure and (for the carrier) flip each slot, then look up the
/// action for each outcome.
MeasuredActions agent_measure(const AgentMemory& memory, const ActionTable& table,
                              const NoiseModel& noise, Registry& registry, Rng& rng);

struct RunRecord {
  std::uint64_t seed;
  Bits alice_bits;
  Bits bob_bits;
  std::vector<std::string> alice_actions;
  std::vector<std::string> bob_actions;
  std::uint64_t alice_action_number;
  std::uint64_t bob_action_number;
  bool agree;
  std::string strike;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct MultiRunRecord {
  std::uint64_t seed;
  std::vector<Bits> bits;                     // per agent
  std::vector<std::vector<std::string>> actions;
  std::vector<std::uint64_t> action_numbers;
  std::vector<std::vector<bool>> pairwise_agree;  // symmetric, diagonal true
  bool all_agree;
  std::string strike;

  friend bool operator==(const MultiRunRecord&, const MultiRunRecord&) = default;
};

/// Order in which agents read their memories; defaults to 0, 1, 2, ...
using MeasurementOrder = std::vector<AgentIndex>;

MultiRunRecord run_multiagent(std::size_t num_agents, std::size_t n_bits, const NoiseModel& noise,
                              std::uint64_t seed, const MeasurementOrder& order = {});

RunRecord run_protocol(std::size_t n_bits, const NoiseModel& noise, std::uint64_t seed,
                       const MeasurementOrder& order = {});

/// Same run, with caller-supplied strike labels.
RunRecord run_protocol(const StrikeSet& strikes, const NoiseModel& noise, std::uint64_t seed,
                       const MeasurementOrder& order = {});

}  // namespace entangle::protocol
