#include "entangle_coord/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace entangle::qsim {

namespace {

void check_qubit(const PureState& state, Qubit q, const char* what) {
  if (q >= state.num_qubits()) {
    throw std::out_of_range(std::string(what) + ": qubit " + std::to_string(q) +
                            " out of range for " + std::to_string(state.num_qubits()) +
                            "-qubit state");
  }
}

void check_cap(std::size_t num_qubits, std::size_t max_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("state needs at least one qubit");
  if (num_qubits > max_qubits) {
    throw std::length_error("state of " + std::to_string(num_qubits) +
                            " qubits exceeds the cap of " + std::to_string(max_qubits));
  }
}

std::vector<Amplitude> zeros(std::size_t num_qubits) {
  return std::vector<Amplitude>(std::size_t{1} << num_qubits);
}

// Bits of `index` at the given qubit positions, packed big-endian in the
// order the qubits are listed.
std::size_t gather(const PureState& state, std::size_t index, std::span<const Qubit> qubits) {
  std::size_t out = 0;
  for (Qubit q : qubits) out = (out << 1) | ((index & state.mask(q)) ? 1u : 0u);
  return out;
}

}  // namespace

PureState::PureState(std::size_t num_qubits, std::vector<Amplitude> amplitudes,
                     std::size_t max_qubits)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  check_cap(num_qubits, max_qubits);
  if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument("amplitude vector length " + std::to_string(amplitudes_.size()) +
                                " does not match 2^" + std::to_string(num_qubits));
  }
  for (const auto& a : amplitudes_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("non-finite amplitude");
    }
  }
  if (std::abs(norm_squared() - 1.0) > kNormTolerance) {
    throw std::invalid_argument("state is not normalized (norm^2 = " +
                                std::to_string(norm_squared()) + ")");
  }
}

std::size_t PureState::mask(Qubit q) const {
  if (q >= num_qubits_) throw std::out_of_range("qubit index out of range");
  return std::size_t{1} << (num_qubits_ - 1 - q);
}

double PureState::norm_squared() const noexcept {
  double total = 0.0;
  for (const auto& a : amplitudes_) total += std::norm(a);
  return total;
}

double DensityMatrix::purity() const {
  // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
  double total = 0.0;
  for (const auto& e : entries) total += std::norm(e);
  return total;
}

PureState basis_state(std::size_t num_qubits, std::size_t index, std::size_t max_qubits) {
  check_cap(num_qubits, max_qubits);
  if (index >= (std::size_t{1} << num_qubits)) {
    throw std::out_of_range("basis index " + std::to_string(index) + " out of range for " +
                            std::to_string(num_qubits) + " qubits");
  }
  auto amps = zeros(num_qubits);
  amps[index] = 1.0;
  return PureState(num_qubits, std::move(amps), max_qubits);
}

PureState prepare_bell() { return prepare_ghz(2); }

PureState prepare_ghz(std::size_t k, std::size_t max_qubits) {
  if (k < 2) throw std::invalid_argument("GHZ state needs k >= 2 qubits");
  check_cap(k, max_qubits);
  auto amps = zeros(k);
  amps.front() = std::numbers::sqrt2 / 2.0;
  amps.back() = std::numbers::sqrt2 / 2.0;
  return PureState(k, std::move(amps), max_qubits);
}

PureState prepare_w() {
  auto amps = zeros(3);
  const double a = 1.0 / std::sqrt(3.0);
  amps[0b011] = a;
  amps[0b101] = a;
  amps[0b110] = a;
  return PureState(3, std::move(amps));
}

PureState prepare_biseparable() {
  auto amps = zeros(3);
  amps[0b101] = std::numbers::sqrt2 / 2.0;
  amps[0b110] = std::numbers::sqrt2 / 2.0;
  return PureState(3, std::move(amps));
}

PureState tensor(const PureState& first, const PureState& second, std::size_t max_qubits) {
  const std::size_t n = first.num_qubits() + second.num_qubits();
  check_cap(n, max_qubits);
  std::vector<Amplitude> amps;
  amps.reserve(first.dimension() * second.dimension());
  for (const auto& a : first.amplitudes()) {
    for (const auto& b : second.amplitudes()) amps.push_back(a * b);
  }
  return PureState(n, std::move(amps), max_qubits);
}

PureState apply_cnot(const PureState& state, Qubit control, Qubit target) {
  check_qubit(state, control, "apply_cnot");
  check_qubit(state, target, "apply_cnot");
  if (control == target) throw std::invalid_argument("apply_cnot: control equals target");
  const std::size_t cmask = state.mask(control);
  const std::size_t tmask = state.mask(target);
  std::vector<Amplitude> amps(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    // Visit each swapped pair once, from its target-clear member.
    if ((i & cmask) && !(i & tmask)) std::swap(amps[i], amps[i | tmask]);
  }
  return PureState(state.num_qubits(), std::move(amps), state.num_qubits());
}

PureState apply_y_rotation(const PureState& state, Qubit qubit, double theta) {
  check_qubit(state, qubit, "apply_y_rotation");
  if (!std::isfinite(theta)) throw std::invalid_argument("apply_y_rotation: non-finite angle");
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const std::size_t m = state.mask(qubit);
  std::vector<Amplitude> amps(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & m) continue;
    const Amplitude a0 = amps[i];
    const Amplitude a1 = amps[i | m];
    amps[i] = c * a0 - s * a1;
    amps[i | m] = s * a0 + c * a1;
  }
  return PureState(state.num_qubits(), std::move(amps), state.num_qubits());
}

BornProbabilities measurement_probabilities(const PureState& state, Qubit qubit) {
  check_qubit(state, qubit, "measurement_probabilities");
  const std::size_t m = state.mask(qubit);
  double p0 = 0.0;
  double p1 = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    (i & m ? p1 : p0) += std::norm(amps[i]);
  }
  return {p0, p1};
}

Outcome collapse(const PureState& state, Qubit qubit, int bit) {
  check_qubit(state, qubit, "collapse");
  if (bit != 0 && bit != 1) throw std::invalid_argument("collapse: bit must be 0 or 1");
  const auto probs = measurement_probabilities(state, qubit);
  const double p = bit == 0 ? probs.p0 : probs.p1;
  if (p < kImpossibleBranch) throw std::domain_error("collapse: branch has zero probability");
  const std::size_t m = state.mask(qubit);
  const double scale = 1.0 / std::sqrt(p);
  std::vector<Amplitude> amps(state.dimension());
  const auto src = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (((i & m) != 0) == (bit == 1)) amps[i] = src[i] * scale;
  }
  return {bit, p, PureState(state.num_qubits(), std::move(amps), state.num_qubits())};
}

Outcome measure_qubit(const PureState& state, Qubit qubit, Rng& rng) {
  const auto probs = measurement_probabilities(state, qubit);
  const double u = rng.uniform();
  int bit;
  if (probs.p1 < kImpossibleBranch) {
    bit = 0;
  } else if (probs.p0 < kImpossibleBranch) {
    bit = 1;
  } else {
    bit = u < probs.p0 ? 0 : 1;
  }
  return collapse(state, qubit, bit);
}

Amplitude inner_product(const PureState& bra, const PureState& ket) {
  if (bra.num_qubits() != ket.num_qubits()) {
    throw std::invalid_argument("inner_product: qubit counts differ");
  }
  Amplitude total = 0.0;
  for (std::size_t i = 0; i < bra.dimension(); ++i) total += std::conj(bra[i]) * ket[i];
  return total;
}

double fidelity(const PureState& a, const PureState& b) { return std::norm(inner_product(a, b)); }

DensityMatrix reduced_density_matrix(const PureState& state, std::span<const Qubit> keep) {
  if (keep.empty()) throw std::invalid_argument("reduced_density_matrix: nothing to keep");
  std::vector<bool> kept(state.num_qubits(), false);
  for (Qubit q : keep) {
    check_qubit(state, q, "reduced_density_matrix");
    if (kept[q]) throw std::invalid_argument("reduced_density_matrix: repeated qubit");
    kept[q] = true;
  }
  std::vector<Qubit> traced;
  for (Qubit q = 0; q < state.num_qubits(); ++q) {
    if (!kept[q]) traced.push_back(q);
  }

  const std::size_t dim = std::size_t{1} << keep.size();
  const std::size_t env = std::size_t{1} << traced.size();
  // psi as a dim x env matrix; rho = psi psi^dagger.
  std::vector<Amplitude> psi(dim * env);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    psi[gather(state, i, keep) * env + gather(state, i, traced)] = amps[i];
  }
  DensityMatrix rho{dim, std::vector<Amplitude>(dim * dim)};
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      Amplitude sum = 0.0;
      for (std::size_t e = 0; e < env; ++e) sum += psi[r * env + e] * std::conj(psi[c * env + e]);
      rho.entries[r * dim + c] = sum;
    }
  }
  return rho;
}

SeparabilityReport is_product(const PureState& state, const Bipartition& cut) {
  if (cut.left.empty() || cut.right.empty()) {
    throw std::invalid_argument("is_product: both sides of the cut must be nonempty");
  }
  std::vector<int> seen(state.num_qubits(), 0);
  std::vector<Qubit> covered;
  for (const auto* side : {&cut.left, &cut.right}) {
    for (Qubit q : *side) {
      check_qubit(state, q, "is_product");
      if (++seen[q] > 1) throw std::invalid_argument("is_product: qubit appears twice in the cut");
      covered.push_back(q);
    }
  }
  // Qubits outside the cut are traced out, which only makes sense when they
  // are already disentangled from it (e.g. measured).
  if (covered.size() < state.num_qubits()) {
    const double whole = reduced_density_matrix(state, covered).purity();
    if (std::abs(whole - 1.0) > kPurityTolerance) {
      throw std::domain_error("is_product: qubits outside the cut are entangled with it");
    }
  }
  const auto& smaller = cut.left.size() <= cut.right.size() ? cut.left : cut.right;
  const double purity = reduced_density_matrix(state, smaller).purity();
  return {std::abs(purity - 1.0) <= kPurityTolerance, purity};
}

}  // namespace entangle::qsim
