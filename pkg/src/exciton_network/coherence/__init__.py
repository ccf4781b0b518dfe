"""K-site coherence witness of stationary network states."""

from exciton_network.coherence.optimizer import (
    WitnessConfig,
    WitnessResult,
    b_key,
    calibrate_b,
    load_b_cache,
    maximize_witness,
    save_b_cache,
    tau,
    witness_thresholds,
)
from exciton_network.coherence.projection import (
    ProjectedState,
    maximally_mixed,
    project_single_excitation,
    w_state,
)
from exciton_network.coherence.witness import (
    BlochPairSet,
    single_excitation_amplitudes,
    witness_prefactor,
    witness_raw,
)

__all__ = [
    "BlochPairSet",
    "ProjectedState",
    "WitnessConfig",
    "WitnessResult",
    "b_key",
    "calibrate_b",
    "load_b_cache",
    "maximally_mixed",
    "maximize_witness",
    "project_single_excitation",
    "save_b_cache",
    "single_excitation_amplitudes",
    "tau",
    "w_state",
    "witness_prefactor",
    "witness_raw",
    "witness_thresholds",
]
