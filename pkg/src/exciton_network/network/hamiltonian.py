"""Dimensionless single-excitation Hamiltonian and time scaling.

Couplings are dipolar, H_ij = Xi / |r_i - r_j|^3, with equal on-site
energies. Lengths in units of the pole distance and Xi / |r_1 - r_N|^3 set
to one make H dimensionless; time is then measured in the scaled unit
t = Xi / |r_1 - r_N|^3 * t_r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import constants
from scipy.spatial.distance import pdist, squareform

from exciton_network.errors import DegenerateGeometryError
from exciton_network.network.geometry import NetworkGeometry


@dataclass(frozen=True)
class Hamiltonian:
    """Real symmetric N x N coupling matrix with zero diagonal."""

    n_sites: int
    matrix: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.matrix.shape != (self.n_sites, self.n_sites):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match n_sites={self.n_sites}")
        self.matrix.setflags(write=False)

    def spectrum(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Eigenvalues (ascending) and orthonormal eigenvectors as columns."""
        energies, vectors = np.linalg.eigh(self.matrix)
        return energies, vectors


def coupling_matrix(geometry: NetworkGeometry) -> Hamiltonian:
    """Build H_ij = 1 / |r_i - r_j|^3 for a geometry.

    Raises:
        DegenerateGeometryError: two sites coincide.
    """
    distances = squareform(pdist(geometry.array()))
    off_diagonal = ~np.eye(geometry.n_sites, dtype=bool)
    if np.any(distances[off_diagonal] <= 0.0):
        i, j = np.argwhere((distances <= 0.0) & off_diagonal)[0]
        raise DegenerateGeometryError(int(i), int(j))
    matrix = np.zeros_like(distances)
    matrix[off_diagonal] = distances[off_diagonal] ** -3
    return Hamiltonian(n_sites=geometry.n_sites, matrix=matrix)


def direct_transfer_time() -> float:
    """Time for full transfer through the bare pole-pole coupling, pi/2."""
    return math.pi / 2


def physical_time(t_scaled: float, xi: float, pole_distance: float) -> float:
    """Convert scaled time to physical time, t_r = t * d^3 / xi.

    ``xi`` is the dipolar coupling constant as an angular frequency times
    length^3, in the same length unit as ``pole_distance``.
    """
    _require_positive(xi=xi, pole_distance=pole_distance)
    return t_scaled * pole_distance**3 / xi


def scaled_time(t_physical: float, xi: float, pole_distance: float) -> float:
    """Inverse of :func:`physical_time`."""
    _require_positive(xi=xi, pole_distance=pole_distance)
    return t_physical * xi / pole_distance**3


def coupling_rate_from_wavenumber(wavenumber_cm: float) -> float:
    """Angular frequency (rad/s) of a coupling given in cm^-1."""
    if wavenumber_cm <= 0:
        raise ValueError(f"wavenumber must be positive, got {wavenumber_cm}")
    return 2.0 * math.pi * constants.c * 100.0 * wavenumber_cm


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if value <= 0:
            raise ValueError(f"{name} must be positive, got {value}")
