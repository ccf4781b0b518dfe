"""Check of the single-excitation truncation against the {0,1,2} space."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from exciton_network.dynamics.basis import ExcitationBasis
from exciton_network.dynamics.liouvillian import build_jump_operators, build_liouvillian
from exciton_network.dynamics.steady_state import steady_state
from exciton_network.network.geometry import NetworkGeometry
from exciton_network.network.hamiltonian import coupling_matrix
from exciton_network.network.rates import RateSet

# Above this the 2-excitation generator (dim (1 + N + N(N-1)/2)^2) gets slow.
MAX_SITES_TWO_EXCITATION = 12

# One-excitation populations below this count as an empty sector.
EMPTY_SECTOR = 1e-14


@dataclass(frozen=True)
class DoubleExcitationCheck:
    """Stationary populations of the one- and two-excitation sectors."""

    one_excitation: float
    two_excitation: float
    ratio: float
    flags: frozenset[str] = field(default_factory=frozenset)


def validate_single_excitation(geometry: NetworkGeometry, rates: RateSet) -> DoubleExcitationCheck:
    """Solve the driven network on the {0,1,2}-excitation space.

    Returns the ratio of total two-excitation to total one-excitation
    stationary population. A vanishing one-excitation population (no
    injection) is reported as ratio 0 with the ``no_excitation`` flag.
    """
    if geometry.n_sites > MAX_SITES_TWO_EXCITATION:
        raise ValueError(
            f"two-excitation check supports at most {MAX_SITES_TWO_EXCITATION} sites, got {geometry.n_sites}"
        )
    h = coupling_matrix(geometry)
    jumps = build_jump_operators(rates, geometry.n_sites, max_excitations=2)
    liouvillian = build_liouvillian(h, jumps, max_excitations=2)
    rho = steady_state(liouvillian)

    numbers = ExcitationBasis(geometry.n_sites, 2).excitation_numbers()
    populations = np.real(np.diag(rho.matrix))
    one = float(populations[numbers == 1].sum())
    two = float(populations[numbers == 2].sum())
    if one <= EMPTY_SECTOR:
        return DoubleExcitationCheck(
            one_excitation=one, two_excitation=two, ratio=0.0, flags=frozenset({"no_excitation"})
        )
    return DoubleExcitationCheck(one_excitation=one, two_excitation=two, ratio=two / one)
