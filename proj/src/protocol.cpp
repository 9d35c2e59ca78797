#include "entangle_coord/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace entangle::protocol {

namespace {

void check_n_bits(std::size_t n_bits) {
  if (n_bits < 1) throw std::invalid_argument("n_bits must be at least 1");
  if (n_bits > kMaxBits) {
    throw std::invalid_argument("n_bits must be at most " + std::to_string(kMaxBits));
  }
}

std::string opaque_token(Rng& rng) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%012llx",
                static_cast<unsigned long long>(rng.next_u64() >> 16));
  return buf;
}

// Reverse lookup through one agent's table.
std::uint64_t decode(const ActionTable& table, const std::vector<std::string>& actions) {
  if (actions.size() != table.n_bits()) {
    throw std::invalid_argument("action sequence length does not match the table");
  }
  Bits bits(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const auto& entry = table.entries[i];
    if (actions[i] == entry[0]) {
      bits[i] = 0;
    } else if (actions[i] == entry[1]) {
      bits[i] = 1;
    } else {
      throw std::invalid_argument("action '" + actions[i] + "' is not in " +
                                  agent_name(table.agent) + "'s table at position " +
                                  std::to_string(i));
    }
  }
  return action_number(bits);
}

MultiRunRecord run_impl(std::size_t num_agents, const StrikeSet& strikes, const NoiseModel& noise,
                        std::uint64_t seed, const MeasurementOrder& order_in) {
  if (num_agents < 2) throw std::invalid_argument("need at least two agents");
  noise.validate();
  if (noise.noise_carrier >= num_agents) {
    throw std::invalid_argument("noise carrier is not one of the agents");
  }
  MeasurementOrder order = order_in;
  if (order.empty()) {
    order.resize(num_agents);
    std::iota(order.begin(), order.end(), AgentIndex{0});
  }
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    MeasurementOrder identity(num_agents);
    std::iota(identity.begin(), identity.end(), AgentIndex{0});
    if (sorted != identity) throw std::invalid_argument("measurement order must list every agent once");
  }

  const std::size_t n_bits = strikes.n_bits();
  Rng rng(seed);
  auto dist = distribute(num_agents, n_bits, rng);
  auto pre = precommunicate(strikes, rng, num_agents);

  std::vector<MeasuredActions> measured(num_agents);
  for (AgentIndex agent : order) {
    measured[agent] = agent_measure(dist.memories[agent], pre.tables[agent], noise, dist.registry, rng);
  }

  MultiRunRecord rec{seed, {}, {}, {}, {}, true, {}};
  for (auto& m : measured) {
    rec.action_numbers.push_back(action_number(m.bits));
    rec.bits.push_back(std::move(m.bits));
    rec.actions.push_back(std::move(m.actions));
  }
  rec.pairwise_agree.assign(num_agents, std::vector<bool>(num_agents, true));
  for (std::size_t i = 0; i < num_agents; ++i) {
    for (std::size_t j = i + 1; j < num_agents; ++j) {
      const bool same = rec.bits[i] == rec.bits[j];
      rec.pairwise_agree[i][j] = rec.pairwise_agree[j][i] = same;
      rec.all_agree = rec.all_agree && same;
    }
  }
  rec.strike = pre.codebook.resolve(rec.actions);
  return rec;
}

}  // namespace

std::string to_string(const Bits& bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

Bits bits_from_string(const std::string& text) {
  Bits bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string may contain only 0 and 1");
    bits.push_back(c == '1');
  }
  return bits;
}

std::uint64_t action_number(const Bits& bits) {
  if (bits.size() > kMaxBits) throw std::invalid_argument("bit string longer than 64 bits");
  std::uint64_t value = 0;
  for (auto b : bits) value = (value << 1) | (b & 1u);
  return value;
}

std::string agent_name(AgentIndex agent) {
  switch (agent) {
    case kAlice: return "Alice";
    case kBob: return "Bob";
    default: return "Agent" + std::to_string(agent);
  }
}

std::string issuer_name(AgentIndex agent) {
  switch (agent) {
    case kAlice: return "Carl";
    case kBob: return "Dave";
    default: return "Issuer" + std::to_string(agent);
  }
}

StrikeSet::StrikeSet(std::size_t n_bits) : n_bits_(n_bits) { check_n_bits(n_bits); }

StrikeSet::StrikeSet(std::size_t n_bits, std::vector<std::string> labels)
    : n_bits_(n_bits), labels_(std::move(labels)) {
  check_n_bits(n_bits);
  if (n_bits >= 32 || labels_.size() != (std::size_t{1} << n_bits)) {
    throw std::invalid_argument("strike set must have exactly 2^n_bits labels");
  }
  std::set<std::string> distinct(labels_.begin(), labels_.end());
  if (distinct.size() != labels_.size()) throw std::invalid_argument("strike labels must be distinct");
}

StrikeSet StrikeSet::canonical(std::size_t n_bits) { return StrikeSet(n_bits); }

std::uint64_t StrikeSet::last_index() const noexcept {
  return n_bits_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_bits_) - 1;
}

std::string StrikeSet::label(std::uint64_t index) const {
  if (index > last_index()) {
    throw std::out_of_range("action number " + std::to_string(index) + " outside the strike set");
  }
  if (labels_.empty()) return "strike-" + std::to_string(index);
  return labels_[index];
}

std::string strike_of(std::uint64_t action_number, const StrikeSet& strikes) {
  return strikes.label(action_number);
}

std::vector<std::string> ActionTable::actions_for(const Bits& bits) const {
  if (bits.size() != entries.size()) throw std::invalid_argument("bit string length does not match table");
  std::vector<std::string> out;
  out.reserve(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out.push_back(entries[i][bits[i] & 1u]);
  return out;
}

StrikeCodebook::StrikeCodebook(std::vector<ActionTable> tables, StrikeSet strikes)
    : tables_(std::move(tables)), strikes_(std::move(strikes)) {}

std::string StrikeCodebook::resolve(const std::vector<std::vector<std::string>>& actions_per_agent) const {
  if (actions_per_agent.size() != tables_.size()) {
    throw std::invalid_argument("need one action sequence per agent");
  }
  const std::uint64_t first = decode(tables_[0], actions_per_agent[0]);
  for (std::size_t a = 1; a < tables_.size(); ++a) {
    if (decode(tables_[a], actions_per_agent[a]) != first) return kAmbiguousStrike;
  }
  return strike_of(first, strikes_);
}

Precommunication precommunicate(const StrikeSet& strikes, Rng& rng, std::size_t num_agents) {
  if (num_agents < 2) throw std::invalid_argument("need at least two agents");
  std::vector<ActionTable> tables;
  for (AgentIndex agent = 0; agent < num_agents; ++agent) {
    ActionTable table{agent, issuer_name(agent), {}};
    std::set<std::string> used;
    for (std::size_t i = 0; i < strikes.n_bits(); ++i) {
      std::array<std::string, 2> entry;
      for (auto& token : entry) {
        do {
          token = opaque_token(rng);
        } while (!used.insert(token).second);
      }
      table.entries.push_back(std::move(entry));
    }
    tables.push_back(std::move(table));
  }
  StrikeCodebook codebook(tables, strikes);
  return {std::move(tables), std::move(codebook)};
}

IssuerInference issuer_view(const ActionTable& table, const std::vector<std::string>& actions,
                            const std::vector<std::string>& unordered_targets) {
  std::set<std::string> distinct(unordered_targets.begin(), unordered_targets.end());
  return {decode(table, actions), {distinct.begin(), distinct.end()}};
}

void Registry::check(QubitRef ref) const {
  if (ref.entry >= states_.size()) throw std::out_of_range("registry entry out of range");
  if (ref.position >= states_[ref.entry].num_qubits()) {
    throw std::out_of_range("qubit position out of range");
  }
}

std::size_t Registry::add(qsim::PureState state) {
  measured_.emplace_back(state.num_qubits(), false);
  states_.push_back(std::move(state));
  return states_.size() - 1;
}

bool Registry::measured(QubitRef ref) const {
  check(ref);
  return measured_[ref.entry][ref.position];
}

void Registry::rotate(QubitRef ref, double theta) {
  check(ref);
  if (theta == 0.0) return;
  states_[ref.entry] = qsim::apply_y_rotation(states_[ref.entry], ref.position, theta);
}

int Registry::measure(QubitRef ref, Rng& rng) {
  check(ref);
  if (measured_[ref.entry][ref.position]) {
    throw std::logic_error("qubit " + std::to_string(ref.position) + " of entry " +
                           std::to_string(ref.entry) + " was already measured");
  }
  auto outcome = qsim::measure_qubit(states_[ref.entry], ref.position, rng);
  states_[ref.entry] = std::move(outcome.post_state);
  measured_[ref.entry][ref.position] = true;
  return outcome.bit;
}

void Registry::extend(std::size_t entry, const qsim::PureState& ancilla) {
  check({entry, 0});
  const std::size_t cap = states_[entry].num_qubits() + ancilla.num_qubits();
  states_[entry] = qsim::tensor(states_[entry], ancilla, std::max(cap, qsim::kDefaultMaxQubits));
  measured_[entry].resize(states_[entry].num_qubits(), false);
}

void Registry::cnot(std::size_t entry, qsim::Qubit control, qsim::Qubit target) {
  check({entry, 0});
  states_[entry] = qsim::apply_cnot(states_[entry], control, target);
}

Distribution distribute(std::size_t num_agents, std::size_t n_bits, Rng& rng) {
  if (num_agents < 2) throw std::invalid_argument("need at least two agents");
  check_n_bits(n_bits);
  Distribution dist;
  dist.memories.resize(num_agents);
  for (AgentIndex a = 0; a < num_agents; ++a) dist.memories[a].agent = a;
  std::vector<qsim::Qubit> positions(num_agents);
  for (std::size_t i = 0; i < n_bits; ++i) {
    const std::size_t entry = dist.registry.add(qsim::prepare_ghz(num_agents));
    std::iota(positions.begin(), positions.end(), qsim::Qubit{0});
    // Fisher-Yates; for two agents this is a single coin flip.
    for (std::size_t j = num_agents - 1; j > 0; --j) {
      std::swap(positions[j], positions[rng.below(j + 1)]);
    }
    for (AgentIndex a = 0; a < num_agents; ++a) dist.memories[a].slots.push_back({entry, positions[a]});
  }
  return dist;
}

Distribution distribute_pairs(std::size_t n_bits, Rng& rng) { return distribute(2, n_bits, rng); }

void NoiseModel::validate() const {
  if (!(flip_prob >= 0.0 && flip_prob <= 0.5)) {
    throw std::invalid_argument("flip probability must lie in [0, 0.5]");
  }
  if (!std::isfinite(misalign_alice) || !std::isfinite(misalign_bob)) {
    throw std::invalid_argument("misalignment angles must be finite");
  }
}

double NoiseModel::misalignment(AgentIndex agent) const {
  switch (agent) {
    case kAlice: return misalign_alice;
    case kBob: return misalign_bob;
    default: return 0.0;
  }
}

MeasuredActions agent_measure(const AgentMemory& memory, const ActionTable& table,
                              const NoiseModel& noise, Registry& registry, Rng& rng) {
  if (memory.slots.size() != table.n_bits()) {
    throw std::invalid_argument("memory and action table lengths differ");
  }
  if (memory.agent != table.agent) throw std::invalid_argument("action table belongs to another agent");
  noise.validate();
  const double theta = noise.misalignment(memory.agent);
  const bool carrier = memory.agent == noise.noise_carrier;

  MeasuredActions out;
  out.bits.reserve(memory.slots.size());
  for (const auto& slot : memory.slots) {
    if (registry.measured(slot)) {
      throw std::logic_error(agent_name(memory.agent) + " already measured this slot");
    }
    registry.rotate(slot, theta);
    int bit = registry.measure(slot, rng);
    // The carrier always draws, so streams line up across flip probabilities.
    if (carrier && rng.bernoulli(noise.flip_prob)) bit ^= 1;
    out.bits.push_back(static_cast<std::uint8_t>(bit));
  }
  out.actions = table.actions_for(out.bits);
  return out;
}

MultiRunRecord run_multiagent(std::size_t num_agents, std::size_t n_bits, const NoiseModel& noise,
                              std::uint64_t seed, const MeasurementOrder& order) {
  return run_impl(num_agents, StrikeSet::canonical(n_bits), noise, seed, order);
}

RunRecord run_protocol(const StrikeSet& strikes, const NoiseModel& noise, std::uint64_t seed,
                       const MeasurementOrder& order) {
  auto multi = run_impl(2, strikes, noise, seed, order);
  return RunRecord{multi.seed,
                   std::move(multi.bits[kAlice]),
                   std::move(multi.bits[kBob]),
                   std::move(multi.actions[kAlice]),
                   std::move(multi.actions[kBob]),
                   multi.action_numbers[kAlice],
                   multi.action_numbers[kBob],
                   multi.all_agree,
                   std::move(multi.strike)};
}

RunRecord run_protocol(std::size_t n_bits, const NoiseModel& noise, std::uint64_t seed,
                       const MeasurementOrder& order) {
  return run_protocol(StrikeSet::canonical(n_bits), noise, seed, order);
}

}  // namespace entangle::protocol
