"""Campaign runner: the per-network pipeline fanned out over worker processes.

Every network is a pure function of ``(CampaignConfig, index)``: its seed
comes from :func:`mix_seed`, and each random choice inside the pipeline is
keyed on that seed. Records reach the parent in completion order, are
appended to the record file as they arrive and sorted by index at the end,
so the finished file does not depend on the worker count.
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Iterable
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np
from joblib import Parallel, delayed

from exciton_network import __version__
from exciton_network.campaign.storage import RecordWriter, write_json
from exciton_network.coherence.optimizer import calibrate_b, tau
from exciton_network.coherence.projection import project_single_excitation
from exciton_network.core.logging import campaign_id_var, network_context
from exciton_network.core.metrics import (
    GEOMETRY_RESAMPLES,
    NETWORKS_COMPLETED,
    NETWORKS_FAILED,
    TAU_NOT_CONVERGED,
    TAU_ORDER_EXCEPTIONS,
    metrics,
)
from exciton_network.dynamics.liouvillian import build_jump_operators, build_liouvillian
from exciton_network.dynamics.steady_state import fluxes, stationary_efficiency, steady_state
from exciton_network.dynamics.transient import transient_efficiency, transient_efficiency_open
from exciton_network.errors import CampaignAbortedError, ExcitonNetworkError
from exciton_network.network.geometry import NetworkGeometry, sample_geometry
from exciton_network.network.hamiltonian import Hamiltonian, coupling_matrix
from exciton_network.network.rates import RateSet
from exciton_network.network.seeding import mix_seed
from exciton_network.schemas.campaign import CampaignConfig, TransientMode
from exciton_network.schemas.record import NetworkRecord

logger = logging.getLogger(__name__)

# Same object as datetime.UTC (Python 3.11+).
UTC = timezone.utc

# Stream tags for per-network random choices other than the geometry.
_SUBSAMPLE_TAG = 0x5EB5

# Failures that turn a network into a flagged record instead of stopping the campaign.
NUMERICAL_ERRORS = (ExcitonNetworkError, ArithmeticError, np.linalg.LinAlgError)

# Largest tolerated share of tau-evaluated networks with tau_3 > 0 but tau_2 <= 0.
TAU_ORDER_LIMIT = 0.01


@dataclass(frozen=True)
class NetworkOutcome:
    """A record plus counters that only the parent process aggregates."""

    record: NetworkRecord
    resamples: int = 0
    tau_not_converged: int = 0


def witness_seed(network_seed: int, k: int) -> int:
    """Seed of the witness restarts for tau_K of one network."""
    return int(np.random.SeedSequence([network_seed, k]).generate_state(1, dtype=np.uint64)[0])


def evaluates_tau(cfg: CampaignConfig, network_seed: int) -> bool:
    """Whether this network is in the tau subsample."""
    if cfg.skip_tau:
        return False
    if cfg.tau_subsample >= 1.0:
        return True
    return bool(np.random.default_rng([network_seed, _SUBSAMPLE_TAG]).random() < cfg.tau_subsample)


def network_geometry(cfg: CampaignConfig, index: int) -> NetworkGeometry:
    return sample_geometry(cfg.n_sites, mix_seed(cfg.master_seed, index), cfg.min_separation)


def _transient(h: Hamiltonian, rates: RateSet, t_weight: float, mode: TransientMode) -> float:
    if mode == "coherent":
        return transient_efficiency(h, t_weight)
    undriven = rates.model_copy(update={"gamma_in": 0.0})
    return transient_efficiency_open(build_liouvillian(h, build_jump_operators(undriven, h.n_sites)), t_weight)


def campaign_id(cfg: CampaignConfig) -> str:
    """Short id tagging every log line of a campaign."""
    return cfg.config_hash()[:12]


def simulate_network(cfg: CampaignConfig, index: int) -> NetworkOutcome:
    """Run the full pipeline for network ``index``.

    Numerical failures become a ``failed:<ErrorType>`` flag on a record
    with NaN quantities.
    """
    seed = mix_seed(cfg.master_seed, index)
    with network_context(index, seed, campaign_id=campaign_id_var.get() or campaign_id(cfg)):
        return _simulate(cfg, index, seed)


def _simulate(cfg: CampaignConfig, index: int, seed: int) -> NetworkOutcome:
    flags: set[str] = set()
    resamples = 0
    try:
        geometry = sample_geometry(cfg.n_sites, seed, cfg.min_separation)
        resamples = geometry.resample_count
        h = coupling_matrix(geometry)
        liouvillian = build_liouvillian(h, build_jump_operators(cfg.rates, cfg.n_sites))
        rho = steady_state(liouvillian)
        flux = fluxes(rho, cfg.rates)
        e_s = stationary_efficiency(rho, cfg.rates)
        e_t = _transient(h, cfg.rates, cfg.t_weight, cfg.transient_mode)
        projected = project_single_excitation(rho)
    except NUMERICAL_ERRORS as exc:
        logger.warning("network failed", extra={"error": type(exc).__name__, "detail": str(exc)})
        record = NetworkRecord(index=index, seed=seed, flags=frozenset({f"failed:{type(exc).__name__}"}))
        return NetworkOutcome(record=record, resamples=resamples)

    if resamples:
        flags.add("geometry_resampled")

    taus: dict[int, float] = {}
    not_converged = 0
    if evaluates_tau(cfg, seed):
        for k in cfg.k_list:
            result = tau(projected, k, cfg.witness, seed=witness_seed(seed, k))
            taus[k] = result.value
            if not result.converged:
                flags.add(f"tau{k}_not_converged")
                not_converged += 1
        if taus.get(3, -math.inf) > 0 and taus.get(2, math.inf) <= 0:
            flags.add("tau_order")
    elif not cfg.skip_tau:
        flags.add("tau_skipped")

    record = NetworkRecord(
        index=index,
        seed=seed,
        e_s=e_s,
        e_t=e_t,
        j_in=flux.j_in,
        j_rec=flux.j_rec,
        j_out=flux.j_out,
        tau=taus,
        weight_1exc=projected.weight,
        flags=frozenset(flags),
    )
    return NetworkOutcome(record=record, resamples=resamples, tau_not_converged=not_converged)


def prepare_witness(cfg: CampaignConfig) -> None:
    """Calibrate every b_KN the campaign needs before workers start."""
    if cfg.skip_tau:
        return
    for k in cfg.k_list:
        calibrate_b(k, cfg.n_sites, cfg.witness)


def tau_order_rate(records: Iterable[NetworkRecord]) -> float:
    """Share of networks with tau_2 and tau_3 where tau_3 > 0 but tau_2 <= 0 (0 when none qualify)."""
    checked = [r for r in records if 2 in r.tau and 3 in r.tau]
    if not checked:
        return 0.0
    return sum("tau_order" in r.flags for r in checked) / len(checked)


def run_campaign(cfg: CampaignConfig) -> list[NetworkRecord]:
    """Simulate ``cfg.n_networks`` networks and persist their records.

    Writes the record file at ``cfg.output_path`` and a metadata JSON next
    to it. Returns the records sorted by index.

    Raises:
        CampaignAbortedError: more than ``cfg.max_failure_fraction`` of the
            networks failed.
    """
    config_hash = cfg.config_hash()
    token = campaign_id_var.set(config_hash[:12])
    metrics.reset()
    started_at = datetime.now(UTC)
    start = time.perf_counter()
    try:
        prepare_witness(cfg)
        calibration_s = time.perf_counter() - start
        logger.info(
            "campaign started",
            extra={"n_networks": cfg.n_networks, "n_sites": cfg.n_sites, "workers": cfg.workers},
        )

        failure_limit = math.floor(cfg.max_failure_fraction * cfg.n_networks)
        failed = 0
        outcomes = Parallel(n_jobs=cfg.workers, return_as="generator_unordered")(
            delayed(simulate_network)(cfg, index) for index in range(cfg.n_networks)
        )
        with RecordWriter(cfg.output_path, cfg.k_list) as sink:
            for outcome in outcomes:
                sink.append(outcome.record)
                _count(outcome)
                if outcome.record.failed:
                    failed += 1
                    if failed > failure_limit:
                        logger.error("campaign aborted", extra={"failed": failed, "completed": sink.count})
                        raise CampaignAbortedError(failed, cfg.n_networks, cfg.max_failure_fraction)
        records = sink.finalize()

        order_rate = tau_order_rate(records)
        if order_rate > TAU_ORDER_LIMIT:
            logger.warning(
                "tau_3 certified without tau_2 more often than expected",
                extra={"tau_order_rate": order_rate, "limit": TAU_ORDER_LIMIT},
            )

        elapsed_s = time.perf_counter() - start
        write_json(
            {
                "config_hash": config_hash,
                "version": __version__,
                "config": cfg.model_dump(mode="json"),
                "bin_width": cfg.bin_width,
                "failures": failed,
                "tau_order_rate": order_rate,
                "metrics": metrics.snapshot(),
                "timings": {
                    "started_at": started_at.isoformat(),
                    "calibration_s": calibration_s,
                    "elapsed_s": elapsed_s,
                },
            },
            cfg.metadata_path,
        )
        logger.info(
            "campaign finished",
            extra={"records": len(records), "failures": failed, "elapsed_s": round(elapsed_s, 3)},
        )
        return records
    finally:
        campaign_id_var.reset(token)


def _count(outcome: NetworkOutcome) -> None:
    record = outcome.record
    metrics.incr(NETWORKS_FAILED if record.failed else NETWORKS_COMPLETED)
    if outcome.resamples:
        metrics.incr(GEOMETRY_RESAMPLES, outcome.resamples)
    if outcome.tau_not_converged:
        metrics.incr(TAU_NOT_CONVERGED, outcome.tau_not_converged)
    if "tau_order" in record.flags:
        metrics.incr(TAU_ORDER_EXCEPTIONS)
