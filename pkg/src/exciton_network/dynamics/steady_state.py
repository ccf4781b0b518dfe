"""Stationary state of the driven network, its fluxes and efficiency."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from exciton_network.dynamics.liouvillian import DensityMatrix, Liouvillian
from exciton_network.errors import DimensionMismatchError, SteadyStateError
from exciton_network.network.rates import RateSet

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
KERNEL_GAP_RATIO = 1e6


@dataclass(frozen=True)
class FluxTriple:
    """Incoming, recombination and sink flux (excitations per scaled time)."""

    j_in: float
    j_rec: float
    j_out: float

    @property
    def imbalance(self) -> float:
        return self.j_in - self.j_rec - self.j_out


def steady_state(
    liouvillian: Liouvillian,
    *,
    residual_tol: float = RESIDUAL_TOL,
    eigenvalue_floor: float = EIGENVALUE_FLOOR,
    check_uniqueness: bool = True,
) -> DensityMatrix:
    """Solve L(rho) = 0 with tr(rho) = 1.

    The equation for rho_00 is redundant (L is trace-annihilating) and is
    replaced by the trace constraint; the resulting dense system is solved
    directly.

    Raises:
        SteadyStateError: singular or ill-conditioned solve, a kernel of
            dimension > 1, a residual above ``residual_tol`` or a negative
            eigenvalue below ``eigenvalue_floor``.
    """
    d = liouvillian.hilbert_dim
    generator = liouvillian.matrix
    system = generator.copy()
    system[0, :] = 0.0
    system[0, :: d + 1] = 1.0
    rhs = np.zeros(d * d, dtype=np.complex128)
    rhs[0] = 1.0

    with warnings.catch_warnings():
        warnings.simplefilter("error", la.LinAlgWarning)
        try:
            solution = la.solve(system, rhs)
        except (la.LinAlgError, la.LinAlgWarning) as exc:
            raise SteadyStateError(f"stationary solve failed: {exc}") from exc

    rho = solution.reshape(d, d)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real

    residual = float(np.linalg.norm(generator @ rho.reshape(d * d)))
    if residual > residual_tol:
        raise SteadyStateError(f"steady-state residual {residual:.3e} exceeds {residual_tol:.1e}")

    if check_uniqueness:
        singular = la.svdvals(generator)
        smallest, second = singular[-1], singular[-2]
        if second < KERNEL_GAP_RATIO * max(smallest, np.finfo(float).tiny):
            raise SteadyStateError(
                f"near-degenerate kernel: singular values {second:.3e} and {smallest:.3e}"
            )

    lowest = float(np.linalg.eigvalsh(rho).min())
    if lowest < eigenvalue_floor:
        raise SteadyStateError(f"steady state has eigenvalue {lowest:.3e} below {eigenvalue_floor:.1e}")

    return DensityMatrix(
        n_sites=liouvillian.n_sites,
        matrix=rho,
        max_excitations=liouvillian.max_excitations,
    )


def _require_single_excitation(rho: DensityMatrix) -> None:
    if rho.dim != rho.n_sites + 1:
        raise DimensionMismatchError(
            f"expected a {{0,1}}-excitation state of dimension {rho.n_sites + 1}, got {rho.dim}"
        )


def fluxes(rho: DensityMatrix, rates: RateSet) -> FluxTriple:
    """Flux decomposition of d<N>/dt on the {0,1}-excitation space.

    j_in is evaluated from the truncated generator, gamma_in (rho_00 - rho_11),
    so that j_in = j_rec + j_out holds exactly on steady states. It differs
    from :func:`incoming_flux_full_space` by gamma_in times the population of
    sites 2..N.
    """
    _require_single_excitation(rho)
    populations = np.real(np.diag(rho.matrix))
    j_in = rates.gamma_in * (populations[0] - populations[1])
    j_rec = rates.gamma_rec * float(populations[1:].sum())
    j_out = rates.gamma_out * populations[rho.n_sites]
    return FluxTriple(j_in=float(j_in), j_rec=j_rec, j_out=float(j_out))


def incoming_flux_full_space(rho: DensityMatrix, rates: RateSet) -> float:
    """gamma_in (1 - 2 rho_11): the incoming flux of the untruncated model."""
    _require_single_excitation(rho)
    return rates.gamma_in * (1.0 - 2.0 * rho.population(1))


def stationary_efficiency(rho: DensityMatrix, rates: RateSet) -> float:
    """E_s = gamma_out / gamma_in * rho_NN, the sink flux per injected excitation."""
    _require_single_excitation(rho)
    if rates.gamma_in <= 0:
        raise ValueError("stationary efficiency is undefined for gamma_in = 0")
    return rates.gamma_out / rates.gamma_in * rho.population(rho.n_sites)
