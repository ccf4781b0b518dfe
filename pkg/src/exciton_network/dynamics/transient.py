"""Coherent transient dynamics and the time-weighted transient efficiency.

The excitation starts on site 1 and evolves unitarily under H. The
transient efficiency weighs the output population with exp(-t / T) / T:

    E_t = (1/T) * int_0^inf p_N(t) exp(-t/T) dt
        = sum_{a,b} c_a c_b / (1 + i T (E_a - E_b)),   c_a = <N|a><a|1>.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as la
from numpy.typing import ArrayLike, NDArray

from exciton_network.dynamics.liouvillian import Liouvillian
from exciton_network.errors import TransientError
from exciton_network.network.hamiltonian import Hamiltonian

IMAGINARY_TOL = 1e-12


def _path_weights(h: Hamiltonian) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    energies, vectors = h.spectrum()
    return energies, vectors[-1, :] * vectors[0, :]


def transient_populations(h: Hamiltonian, times: ArrayLike) -> NDArray[np.float64]:
    """p_N(t) = |<N| exp(-iHt) |1>|^2 on a grid of times."""
    t = np.atleast_1d(np.asarray(times, dtype=np.float64))
    if np.any(t < 0):
        raise ValueError("times must be non-negative")
    energies, weights = _path_weights(h)
    amplitudes = np.exp(-1j * np.outer(t, energies)) @ weights
    return np.abs(amplitudes) ** 2


def transient_population(h: Hamiltonian, t: float) -> float:
    """Output-site population at time t."""
    return float(transient_populations(h, [t])[0])


def transient_efficiency(h: Hamiltonian, t_weight: float) -> float:
    """Closed-form E_t for weight time ``t_weight``."""
    return float(transient_efficiencies(h, [t_weight])[0])


def transient_efficiencies(h: Hamiltonian, t_weights: ArrayLike) -> NDArray[np.float64]:
    """E_t for several weight times from a single eigendecomposition of H."""
    t = np.atleast_1d(np.asarray(t_weights, dtype=np.float64))
    if np.any(t <= 0):
        raise ValueError(f"t_weight must be positive, got {t.min()}")
    energies, weights = _path_weights(h)
    gaps = energies[:, None] - energies[None, :]
    paths = np.outer(weights, weights)
    values = np.array([np.sum(paths / (1.0 + 1j * tw * gaps)) for tw in t])
    worst = float(np.max(np.abs(values.imag)))
    if worst > IMAGINARY_TOL:
        raise TransientError(worst)
    return np.clip(values.real, 0.0, 1.0)


def transient_efficiency_open(liouvillian: Liouvillian, t_weight: float) -> float:
    """E_t with the excitation evolving under a Liouvillian instead of H alone.

    Uses the resolvent, (1/T) int exp(Lt) exp(-t/T) dt = (1/T) (1/T - L)^-1.
    The generator should be built without injection so that the initial
    excitation is not replenished.
    """
    if t_weight <= 0:
        raise ValueError(f"t_weight must be positive, got {t_weight}")
    if liouvillian.max_excitations != 1:
        raise ValueError("open transient efficiency is defined on the {0,1}-excitation space")
    d = liouvillian.hilbert_dim
    n = liouvillian.n_sites
    initial = np.zeros(d * d, dtype=np.complex128)
    initial[1 * d + 1] = 1.0
    resolvent_rhs = la.solve(np.eye(d * d) / t_weight - liouvillian.matrix, initial)
    value = resolvent_rhs[n * d + n] / t_weight
    return float(np.clip(value.real, 0.0, 1.0))
