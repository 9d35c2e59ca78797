"""Simulator for entanglement-based correlated action selection."""

from entangle_coord._core import (
    PureState,
    Rng,
    __version__,
    apply_cnot,
    apply_y_rotation,
    basis_state,
    binary_entropy,
    biseparable_attack,
    cli,
    collapse,
    derive_seed,
    eve_ghz_attack,
    eve_w_attack,
    fidelity,
    is_product,
    measure_qubit,
    measurement_probabilities,
    nicd_certificate,
    nicd_max_correlation,
    prepare_bell,
    prepare_biseparable,
    prepare_ghz,
    prepare_w,
    reconcile,
    run_multiagent,
    run_protocol,
    shannon_length_bound,
    tensor,
    wolf_cnot_attack,
)

__all__ = [
    "PureState",
    "Rng",
    "__version__",
    "apply_cnot",
    "apply_y_rotation",
    "basis_state",
    "binary_entropy",
    "biseparable_attack",
    "cli",
    "collapse",
    "derive_seed",
    "eve_ghz_attack",
    "eve_w_attack",
    "fidelity",
    "is_product",
    "measure_qubit",
    "measurement_probabilities",
    "nicd_certificate",
    "nicd_max_correlation",
    "prepare_bell",
    "prepare_biseparable",
    "prepare_ghz",
    "prepare_w",
    "reconcile",
    "run_multiagent",
    "run_protocol",
    "shannon_length_bound",
    "tensor",
    "wolf_cnot_attack",
]
