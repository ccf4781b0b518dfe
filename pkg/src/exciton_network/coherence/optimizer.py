"""Multi-start Nelder-Mead maximization and normalization of the witness.

Any parameter set gives a valid lower bound on the witness maximum, so
under-optimization can only miss coherence, never report it falsely.
Restarts trade compute for detection power.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field, field_validator
from scipy.optimize import minimize

from exciton_network.coherence.projection import ProjectedState, w_state
from exciton_network.coherence.witness import BlochPairSet, witness_objective, witness_prefactor
from exciton_network.errors import WitnessCalibrationError

logger = logging.getLogger(__name__)


def b_key(k: int, n_sites: int) -> str:
    """Cache key of b_KN (JSON object keys must be strings)."""
    return f"{k},{n_sites}"


class WitnessConfig(BaseModel):
    """Optimizer budget and cached normalizations."""

    restarts: Annotated[int, Field(ge=1)] = 8
    screen_iters: Annotated[int, Field(ge=1)] = 400
    max_iters: Annotated[int, Field(ge=1)] = 2000
    tol: Annotated[float, Field(gt=0.0)] = 1e-8
    polish_rounds: Annotated[int, Field(ge=0)] = 1
    calibration_seed: Annotated[int, Field(ge=0)] = 0
    b_cache: dict[str, float] = Field(default_factory=dict)

    @field_validator("b_cache")
    @classmethod
    def _positive_normalizations(cls, v: dict[str, float]) -> dict[str, float]:
        for key, value in v.items():
            if value <= 0:
                raise ValueError(f"b_cache[{key!r}] must be positive, got {value}")
        return v


@dataclass(frozen=True)
class WitnessResult:
    """Best witness value found and how it was reached."""

    value: float
    raw: float
    params: BlochPairSet
    converged: bool
    restart_values: tuple[float, ...]

    @property
    def certifies(self) -> bool:
        return self.value > 0.0


def _nelder_mead(
    objective: Callable[[NDArray[np.float64]], float],
    x0: NDArray[np.float64],
    max_iters: int,
    tol: float,
) -> tuple[float, NDArray[np.float64], bool]:
    options = {"maxiter": max_iters, "xatol": tol, "fatol": tol, "adaptive": True}
    result = minimize(objective, x0, method="Nelder-Mead", options=options)
    return float(result.fun), result.x, bool(result.success)


def _local_search(
    objective: Callable[[NDArray[np.float64]], float],
    x0: NDArray[np.float64],
    cfg: WitnessConfig,
) -> tuple[float, NDArray[np.float64], bool]:
    """Nelder-Mead from x0, re-started from its own endpoint while that still helps."""
    best_f, best_x, converged = _nelder_mead(objective, x0, cfg.max_iters, cfg.tol)
    for _ in range(cfg.polish_rounds):
        f, x, converged = _nelder_mead(objective, best_x, cfg.max_iters, cfg.tol)
        improved = best_f - f
        if improved > 0:
            best_f, best_x = f, x
        if improved <= cfg.tol:
            break
    return -best_f, best_x, converged


def maximize_witness(rho: ProjectedState, k: int, cfg: WitnessConfig, seed: int) -> WitnessResult:
    """Maximize the raw witness over Bloch angles.

    Every start gets a short screening search of ``screen_iters`` iterations.
    Starts that beat all earlier screened values are then searched to
    convergence. The first start is the symmetric point (all theta = pi/2,
    phi = 0) and the remaining ``restarts - 1`` are drawn in sequence from
    ``seed``, so a smaller budget screens and polishes a prefix of what a
    larger one does.
    """
    n = rho.n_sites
    objective = witness_objective(rho.matrix, witness_prefactor(k, n))
    rng = np.random.default_rng(seed)
    starts = [BlochPairSet.symmetric(n)]
    starts += [BlochPairSet.random(n, rng) for _ in range(cfg.restarts - 1)]

    screen_iters = min(cfg.screen_iters, cfg.max_iters)
    values: list[float] = []
    best_value, best_x, best_converged = -np.inf, starts[0].to_vector(), False
    for start in starts:
        f, x, _ = _nelder_mead(objective, start.to_vector(), screen_iters, cfg.tol)
        screened = -f
        record = not values or screened > max(values)
        values.append(screened)
        if not record:
            continue
        value, polished, converged = _local_search(objective, x, cfg)
        if value < screened:
            value, polished = screened, x
        if value > best_value:
            best_value, best_x, best_converged = value, polished, converged

    return WitnessResult(
        value=best_value,
        raw=best_value,
        params=BlochPairSet.from_vector(best_x),
        converged=best_converged,
        restart_values=tuple(values),
    )


def calibrate_b(k: int, n_sites: int, cfg: WitnessConfig) -> float:
    """b_KN = 1 / max witness_raw(W_KN), cached in ``cfg.b_cache``.

    Raises:
        WitnessCalibrationError: the maximum found is not positive.
    """
    key = b_key(k, n_sites)
    if key in cfg.b_cache:
        return cfg.b_cache[key]
    best = maximize_witness(w_state(k, n_sites), k, cfg, seed=cfg.calibration_seed)
    if best.raw <= 0:
        raise WitnessCalibrationError(k, n_sites, best.raw)
    b = 1.0 / best.raw
    cfg.b_cache[key] = b
    logger.info("calibrated witness normalization", extra={"k": k, "n_sites": n_sites, "b": b})
    return b


def tau(rho: ProjectedState, k: int, cfg: WitnessConfig, seed: int | None = None) -> WitnessResult:
    """Normalized witness tau_KN: positive values certify K-site coherence.

    ``seed`` drives the random restarts (defaults to the calibration seed).
    Non-convergence is reported through ``WitnessResult.converged``.
    """
    b = calibrate_b(k, rho.n_sites, cfg)
    best = maximize_witness(rho, k, cfg, seed=cfg.calibration_seed if seed is None else seed)
    if not best.converged:
        logger.debug("witness optimizer did not converge", extra={"k": k, "raw": best.raw})
    return WitnessResult(
        value=b * best.raw,
        raw=best.raw,
        params=best.params,
        converged=best.converged,
        restart_values=best.restart_values,
    )


def witness_thresholds(n_sites: int, k_list: list[int], cfg: WitnessConfig) -> list[tuple[int, int, float]]:
    """tau_{K,N}(W_{K',N}) for every K in ``k_list`` and K' in 2..N.

    tau_K(W_{K'}) bounds what states without (K'+1)-site coherence can reach.
    """
    rows: list[tuple[int, int, float]] = []
    for k in k_list:
        for k_prime in range(2, n_sites + 1):
            rows.append((k, k_prime, tau(w_state(k_prime, n_sites), k, cfg).value))
    return rows


def save_b_cache(cfg: WitnessConfig, path: Path) -> None:
    """Persist calibrated normalizations as a JSON object."""
    path.write_text(json.dumps(dict(sorted(cfg.b_cache.items())), indent=2))


def load_b_cache(path: Path) -> dict[str, float]:
    """Read normalizations written by :func:`save_b_cache` (empty if missing)."""
    if not path.exists():
        return {}
    data: dict[str, float] = json.loads(path.read_text())
    return {str(key): float(value) for key, value in data.items()}
