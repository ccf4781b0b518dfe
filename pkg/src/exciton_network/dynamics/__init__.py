"""Master-equation generator, stationary state and transient dynamics."""

from exciton_network.dynamics.basis import ExcitationBasis
from exciton_network.dynamics.liouvillian import (
    DensityMatrix,
    JumpOperator,
    Liouvillian,
    build_jump_operators,
    build_liouvillian,
    evolve,
    ground_state,
    matrix_to_pairs,
    pairs_to_matrix,
    site_state,
)
from exciton_network.dynamics.steady_state import (
    FluxTriple,
    fluxes,
    incoming_flux_full_space,
    stationary_efficiency,
    steady_state,
)
from exciton_network.dynamics.transient import (
    transient_efficiency,
    transient_efficiencies,
    transient_efficiency_open,
    transient_population,
    transient_populations,
)
from exciton_network.dynamics.two_excitation import DoubleExcitationCheck, validate_single_excitation

__all__ = [
    "DensityMatrix",
    "DoubleExcitationCheck",
    "ExcitationBasis",
    "FluxTriple",
    "JumpOperator",
    "Liouvillian",
    "build_jump_operators",
    "build_liouvillian",
    "evolve",
    "fluxes",
    "ground_state",
    "incoming_flux_full_space",
    "matrix_to_pairs",
    "pairs_to_matrix",
    "site_state",
    "stationary_efficiency",
    "steady_state",
    "transient_efficiencies",
    "transient_efficiency",
    "transient_efficiency_open",
    "transient_population",
    "transient_populations",
]
