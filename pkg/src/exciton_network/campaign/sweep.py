"""Correlation of transient and stationary efficiency over (gamma_rec, T) grids."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed
from numpy.typing import NDArray

from exciton_network.analysis.stats import pearson
from exciton_network.campaign.runner import NUMERICAL_ERRORS, campaign_id, network_geometry
from exciton_network.campaign.storage import write_json, write_table
from exciton_network.core.logging import campaign_id_var, network_context
from exciton_network.core.metrics import NETWORKS_FAILED, metrics
from exciton_network.dynamics.liouvillian import build_jump_operators, build_liouvillian
from exciton_network.dynamics.steady_state import stationary_efficiency, steady_state
from exciton_network.dynamics.transient import transient_efficiencies, transient_efficiency_open
from exciton_network.errors import CampaignAbortedError, ConfigurationError, StatisticsError
from exciton_network.network.hamiltonian import coupling_matrix
from exciton_network.network.seeding import mix_seed
from exciton_network.schemas.campaign import CampaignConfig

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["inverse_gamma_rec", "gamma_rec", "t_weight", "gamma_rec_t", "kappa", "n"]


@dataclass(frozen=True)
class SweepPoint:
    gamma_rec: float
    t_weight: float
    kappa: float
    n: int

    @property
    def inverse_gamma_rec(self) -> float:
        return 1.0 / self.gamma_rec

    @property
    def rec_t_product(self) -> float:
        """gamma_rec * T, the ratio of weighting time to excitation lifetime."""
        return self.gamma_rec * self.t_weight


@dataclass(frozen=True)
class SweepResult:
    points: tuple[SweepPoint, ...]

    def kappa(self, gamma_rec: float, t_weight: float) -> float:
        for point in self.points:
            if math.isclose(point.gamma_rec, gamma_rec) and math.isclose(point.t_weight, t_weight):
                return point.kappa
        raise KeyError((gamma_rec, t_weight))

    def row_argmax(self) -> dict[float, float]:
        """For each T, the gamma_rec^-1 with the largest kappa (NaN rows skipped)."""
        best: dict[float, SweepPoint] = {}
        for point in sorted(self.points, key=lambda p: p.inverse_gamma_rec):
            if math.isnan(point.kappa):
                continue
            current = best.get(point.t_weight)
            if current is None or point.kappa > current.kappa:
                best[point.t_weight] = point
        return {t: p.inverse_gamma_rec for t, p in best.items()}


def _sweep_network(
    cfg: CampaignConfig,
    index: int,
    gamma_rec_grid: Sequence[float],
    t_grid: Sequence[float],
) -> tuple[int, NDArray[np.float64], NDArray[np.float64]]:
    """E_s per gamma_rec and E_t per (gamma_rec, T) for one geometry; NaN on failure."""
    n_rec, n_t = len(gamma_rec_grid), len(t_grid)
    e_s = np.full(n_rec, np.nan)
    e_t = np.full((n_rec, n_t), np.nan)
    seed = mix_seed(cfg.master_seed, index)
    with network_context(index, seed, campaign_id=campaign_id_var.get() or campaign_id(cfg)):
        try:
            h = coupling_matrix(network_geometry(cfg, index))
            coherent = transient_efficiencies(h, t_grid) if cfg.transient_mode == "coherent" else None
        except NUMERICAL_ERRORS as exc:
            logger.warning("sweep network failed", extra={"error": type(exc).__name__})
            return index, e_s, e_t

        for r, gamma_rec in enumerate(gamma_rec_grid):
            rates = cfg.rates.with_recombination(gamma_rec)
            try:
                rho = steady_state(build_liouvillian(h, build_jump_operators(rates, h.n_sites)))
                e_s[r] = stationary_efficiency(rho, rates)
                if coherent is not None:
                    e_t[r] = coherent
                else:
                    undriven = build_jump_operators(rates.model_copy(update={"gamma_in": 0.0}), h.n_sites)
                    open_generator = build_liouvillian(h, undriven)
                    e_t[r] = [transient_efficiency_open(open_generator, t) for t in t_grid]
            except NUMERICAL_ERRORS as exc:
                logger.warning("sweep point failed", extra={"gamma_rec": gamma_rec, "error": type(exc).__name__})
                e_s[r] = np.nan
                e_t[r] = np.nan
    return index, e_s, e_t


def sweep_correlation(
    cfg: CampaignConfig,
    gamma_rec_grid: Sequence[float],
    t_grid: Sequence[float],
) -> SweepResult:
    """kappa(E_t, E_s) for every (gamma_rec, T) over the campaign's networks.

    Each geometry's Hamiltonian and eigendecomposition are computed once and
    reused across the grid. A network counts as failed when any of its grid
    points failed.

    Raises:
        ConfigurationError: an empty grid or a non-positive grid value.
        CampaignAbortedError: more than ``cfg.max_failure_fraction`` of the
            networks failed.
    """
    if not gamma_rec_grid or not t_grid:
        raise ConfigurationError("sweep grids must be non-empty")
    if min(gamma_rec_grid) <= 0 or min(t_grid) <= 0:
        raise ConfigurationError("sweep grid values must be positive")

    failure_limit = math.floor(cfg.max_failure_fraction * cfg.n_networks)
    failed = 0
    e_s = np.full((cfg.n_networks, len(gamma_rec_grid)), np.nan)
    e_t = np.full((cfg.n_networks, len(gamma_rec_grid), len(t_grid)), np.nan)
    outcomes = Parallel(n_jobs=cfg.workers, return_as="generator_unordered")(
        delayed(_sweep_network)(cfg, index, list(gamma_rec_grid), list(t_grid))
        for index in range(cfg.n_networks)
    )
    for index, network_e_s, network_e_t in outcomes:
        e_s[index], e_t[index] = network_e_s, network_e_t
        if np.any(np.isnan(network_e_s)):
            failed += 1
            metrics.incr(NETWORKS_FAILED)
            if failed > failure_limit:
                logger.error("sweep aborted", extra={"failed": failed})
                raise CampaignAbortedError(failed, cfg.n_networks, cfg.max_failure_fraction)

    points: list[SweepPoint] = []
    for r, gamma_rec in enumerate(gamma_rec_grid):
        for t, t_weight in enumerate(t_grid):
            xs, ys = e_t[:, r, t], e_s[:, r]
            mask = np.isfinite(xs) & np.isfinite(ys)
            try:
                kappa = pearson(xs[mask], ys[mask])
            except StatisticsError as exc:
                logger.warning(
                    "kappa undefined",
                    extra={"gamma_rec": gamma_rec, "t_weight": t_weight, "detail": str(exc)},
                )
                kappa = math.nan
            points.append(
                SweepPoint(gamma_rec=float(gamma_rec), t_weight=float(t_weight), kappa=kappa, n=int(mask.sum()))
            )

    logger.info("sweep finished", extra={"points": len(points), "networks": cfg.n_networks, "failed": failed})
    return SweepResult(points=tuple(points))


def write_sweep(result: SweepResult, table_path: Path, summary_path: Path) -> None:
    """kappa table as CSV plus a JSON summary with the per-T argmax."""
    write_table(
        table_path,
        SWEEP_COLUMNS,
        (
            [p.inverse_gamma_rec, p.gamma_rec, p.t_weight, p.rec_t_product, p.kappa, p.n]
            for p in result.points
        ),
    )
    write_json(
        {
            "points": [
                {
                    "inverse_gamma_rec": p.inverse_gamma_rec,
                    "gamma_rec": p.gamma_rec,
                    "t_weight": p.t_weight,
                    "kappa": None if math.isnan(p.kappa) else p.kappa,
                    "n": p.n,
                }
                for p in result.points
            ],
            "argmax_inverse_gamma_rec": {repr(t): inv for t, inv in result.row_argmax().items()},
        },
        summary_path,
    )
