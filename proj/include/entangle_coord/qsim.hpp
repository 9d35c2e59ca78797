#pragma once

// Minimal pure-statevector simulator.
//
// Basis convention, used everywhere in this project: qubit 0 is the leftmost
// symbol of a ket and basis indices are the big-endian reading of the ket, so
// |011> is index 3 and qubit q of an n-qubit register is bit (n - 1 - q).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "entangle_coord/random.hpp"

namespace entangle::qsim {

using Amplitude = std::complex<double>;
using Qubit = std::size_t;

inline constexpr std::size_t kDefaultMaxQubits = 20;
inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kPurityTolerance = 1e-9;
// Branches with Born probability below this are never sampled.
inline constexpr double kImpossibleBranch = 1e-12;

/// Normalized state vector over `num_qubits` qubits. Construction validates
/// the length (2^num_qubits), finiteness, normalization and the qubit cap.
class PureState {
 public:
  PureState(std::size_t num_qubits, std::vector<Amplitude> amplitudes,
            std::size_t max_qubits = kDefaultMaxQubits);

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
  const Amplitude& operator[](std::size_t index) const { return amplitudes_.at(index); }

  /// Index mask selecting qubit `q` within a basis index.
  std::size_t mask(Qubit q) const;

  double norm_squared() const noexcept;

  friend bool operator==(const PureState&, const PureState&) = default;

 private:
  std::size_t num_qubits_;
  std::vector<Amplitude> amplitudes_;
};

struct BornProbabilities {
  double p0;
  double p1;
};

struct Outcome {
  int bit;
  double probability;
  PureState post_state;
};

/// Two-sided cut of a register's qubits.
struct Bipartition {
  std::vector<Qubit> left;
  std::vector<Qubit> right;
};

struct SeparabilityReport {
  bool product;
  double purity;  // Tr(rho^2) of the reduced state of the smaller side
};

/// Row-major Hermitian matrix over the kept qubits (in the order given).
struct DensityMatrix {
  std::size_t dimension;
  std::vector<Amplitude> entries;

  const Amplitude& at(std::size_t row, std::size_t col) const {
    return entries.at(row * dimension + col);
  }
  double purity() const;
};

PureState basis_state(std::size_t num_qubits, std::size_t index,
                      std::size_t max_qubits = kDefaultMaxQubits);

/// 2^{-1/2}(|00> + |11>)
PureState prepare_bell();

/// 2^{-1/2}(|0...0> + |1...1>) on k >= 2 qubits.
PureState prepare_ghz(std::size_t k, std::size_t max_qubits = kDefaultMaxQubits);

/// 3^{-1/2}(|011> + |101> + |110>). Weight-two form, as printed in the
/// protocol analysis (the bit-flip of the usual weight-one W state).
PureState prepare_w();

/// 2^{-1/2}(|101> + |110>) = |1> (x) 2^{-1/2}(|01> + |10>)
PureState prepare_biseparable();

/// Kronecker product; `first`'s qubits come first (leftmost).
PureState tensor(const PureState& first, const PureState& second,
                 std::size_t max_qubits = kDefaultMaxQubits);

PureState apply_cnot(const PureState& state, Qubit control, Qubit target);

/// Real rotation [[cos t/2, -sin t/2], [sin t/2, cos t/2]] on one qubit.
PureState apply_y_rotation(const PureState& state, Qubit qubit, double theta);

BornProbabilities measurement_probabilities(const PureState& state, Qubit qubit);

/// Projects onto `bit` and renormalizes. Throws std::domain_error if the
/// branch is impossible (probability below kImpossibleBranch).
Outcome collapse(const PureState& state, Qubit qubit, int bit);

/// Samples a Born-rule outcome with exactly one draw from `rng`.
Outcome measure_qubit(const PureState& state, Qubit qubit, Rng& rng);

Amplitude inner_product(const PureState& bra, const PureState& ket);

/// |<a|b>|^2
double fidelity(const PureState& a, const PureState& b);

/// Partial trace down to `keep` (distinct, in range, nonempty).
DensityMatrix reduced_density_matrix(const PureState& state, std::span<const Qubit> keep);

/// Purity of the smaller side's reduced state; product iff purity is 1
/// within kPurityTolerance (Schmidt rank 1). The cut may leave qubits out
/// (say, already measured ones) provided the covered qubits are in a pure
/// state; otherwise std::domain_error.
SeparabilityReport is_product(const PureState& state, const Bipartition& cut);

}  // namespace entangle::qsim
