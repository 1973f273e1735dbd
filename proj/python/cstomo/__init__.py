"""Compressed-sensing quantum state tomography."""

from ._cstomo import (
    Dataset,
    Error,
    born_probabilities,
    cross_validate,
    dephased_ghz,
    direct_fidelity,
    enumerate_settings,
    epsilon_hat,
    expected_noise,
    fidelity,
    ghz_pauli_decomposition,
    ghz_state,
    mle,
    purity,
    reconstruct,
    required_settings,
    simulate,
    sweep_grid,
    sweep_settings,
)

__all__ = [
    "Dataset",
    "Error",
    "born_probabilities",
    "cross_validate",
    "dephased_ghz",
    "direct_fidelity",
    "enumerate_settings",
    "epsilon_hat",
    "expected_noise",
    "fidelity",
    "ghz_pauli_decomposition",
    "ghz_state",
    "mle",
    "purity",
    "reconstruct",
    "required_settings",
    "simulate",
    "sweep_grid",
    "sweep_settings",
]
