"""Random network geometries inside the unit-diameter ball.

Site 1 and site N sit on the poles (0, 0, -1/2) and (0, 0, +1/2); all other
sites are drawn uniformly inside the closed ball of diameter 1 spanned by
them. Lengths are measured in units of the pole distance |r_1 - r_N|.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Annotated

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.spatial.distance import pdist

from exciton_network.errors import InfeasibleSeparationError

logger = logging.getLogger(__name__)

DEFAULT_MIN_SEPARATION = 1e-3
MAX_RESAMPLES = 10_000
BALL_RADIUS = 0.5
POSITION_TOL = 1e-12

Position = tuple[float, float, float]

_INPUT_POLE: Position = (0.0, 0.0, -BALL_RADIUS)
_OUTPUT_POLE: Position = (0.0, 0.0, BALL_RADIUS)


class NetworkGeometry(BaseModel):
    """Site positions of one random network realization.

    The JSON form is the model dump: ``{n_sites, seed, min_separation,
    resample_count, positions}`` with positions in pole-distance units.
    """

    model_config = ConfigDict(frozen=True)

    n_sites: Annotated[int, Field(ge=2)]
    seed: Annotated[int, Field(ge=0, lt=2**64)]
    min_separation: Annotated[float, Field(ge=0.0, lt=0.5)] = DEFAULT_MIN_SEPARATION
    resample_count: Annotated[int, Field(ge=0)] = 0
    positions: tuple[Position, ...]

    @model_validator(mode="after")
    def _check_positions(self) -> "NetworkGeometry":
        if len(self.positions) != self.n_sites:
            raise ValueError(f"expected {self.n_sites} positions, got {len(self.positions)}")
        positions = self.array()
        if not np.allclose(positions[0], _INPUT_POLE, rtol=0.0, atol=POSITION_TOL):
            raise ValueError(f"site 1 must sit on the pole {_INPUT_POLE}, got {self.positions[0]}")
        if not np.allclose(positions[-1], _OUTPUT_POLE, rtol=0.0, atol=POSITION_TOL):
            raise ValueError(f"site {self.n_sites} must sit on the pole {_OUTPUT_POLE}, got {self.positions[-1]}")
        outside = np.flatnonzero(np.linalg.norm(positions, axis=1) > BALL_RADIUS + POSITION_TOL)
        if outside.size:
            raise ValueError(f"sites {(outside + 1).tolist()} lie outside the ball of radius {BALL_RADIUS}")
        return self

    def array(self) -> NDArray[np.float64]:
        """Positions as an (n_sites, 3) array."""
        return np.asarray(self.positions, dtype=np.float64)

    def pairwise_distances(self) -> NDArray[np.float64]:
        """Condensed pairwise distance vector (scipy ``pdist`` order)."""
        return pdist(self.array())

    def permuted(self, order: list[int]) -> "NetworkGeometry":
        """Geometry with interior sites relabelled by ``order``.

        ``order`` is a permutation of ``range(1, n_sites - 1)``; the poles
        keep their labels.
        """
        if sorted(order) != list(range(1, self.n_sites - 1)):
            raise ValueError("order must permute the interior site indices")
        new = [self.positions[0], *(self.positions[i] for i in order), self.positions[-1]]
        return self.model_copy(update={"positions": tuple(new)})


def sample_geometry(
    n_sites: int,
    seed: int,
    min_separation: float = DEFAULT_MIN_SEPARATION,
    *,
    max_resamples: int = MAX_RESAMPLES,
) -> NetworkGeometry:
    """Draw a random network with the input and output site on the poles.

    Interior sites are drawn by rejection from the bounding cube, which is
    exactly uniform in the ball. A configuration with any pair of sites closer
    than ``min_separation`` is discarded as a whole and redrawn.

    Raises:
        InfeasibleSeparationError: after ``max_resamples`` rejected configurations.
    """
    if n_sites < 2:
        raise ValueError(f"n_sites must be >= 2, got {n_sites}")
    if not 0.0 <= min_separation < 0.5:
        raise ValueError(f"min_separation must lie in [0, 0.5), got {min_separation}")

    rng = np.random.default_rng(seed)
    resamples = 0
    while True:
        interior = [_draw_in_ball(rng) for _ in range(n_sites - 2)]
        positions = np.array([_INPUT_POLE, *interior, _OUTPUT_POLE], dtype=np.float64)
        if n_sites == 2 or pdist(positions).min() >= min_separation:
            break
        resamples += 1
        if resamples >= max_resamples:
            raise InfeasibleSeparationError(n_sites, min_separation, resamples)

    if resamples:
        logger.debug("geometry resampled", extra={"seed": seed, "resamples": resamples})

    return NetworkGeometry(
        n_sites=n_sites,
        seed=seed,
        min_separation=min_separation,
        resample_count=resamples,
        positions=tuple((float(x), float(y), float(z)) for x, y, z in positions),
    )


def _draw_in_ball(rng: np.random.Generator) -> NDArray[np.float64]:
    while True:
        point = rng.uniform(-BALL_RADIUS, BALL_RADIUS, size=3)
        if float(point @ point) <= BALL_RADIUS**2:
            return point


def save_geometry(geometry: NetworkGeometry, path: Path) -> None:
    """Write a geometry as JSON (full double precision)."""
    path.write_text(geometry.model_dump_json(indent=2))


def load_geometry(path: Path) -> NetworkGeometry:
    """Read a geometry written by :func:`save_geometry`."""
    return NetworkGeometry.model_validate_json(path.read_text())
