"""Command-line entry point: ``exciton-network <command> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import re
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from exciton_network import __version__
from exciton_network.analysis.binning import bin_by_efficiency, binned_tau_table
from exciton_network.analysis.stats import pearson
from exciton_network.campaign.fractions import HIGH_EFFICIENCY_CUT, coherence_fractions
from exciton_network.campaign.runner import network_geometry, run_campaign
from exciton_network.campaign.storage import (
    read_records,
    write_binned_table,
    write_geometries,
    write_json,
    write_table,
)
from exciton_network.campaign.sweep import sweep_correlation, write_sweep
from exciton_network.coherence.optimizer import load_b_cache, save_b_cache, witness_thresholds
from exciton_network.config import Settings, get_settings
from exciton_network.core.logging import setup_logging
from exciton_network.dynamics.two_excitation import validate_single_excitation
from exciton_network.errors import ConfigurationError, ExcitonNetworkError, StatisticsError
from exciton_network.network.seeding import mix_seed
from exciton_network.schemas.campaign import CampaignConfig

logger = logging.getLogger(__name__)

# Largest two-excitation population ratio accepted by validate2exc.
DOUBLE_EXCITATION_LIMIT = 1e-3

_PI_MULTIPLE = re.compile(r"^\s*(?P<coef>[0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*(?P<div>[0-9.eE+-]+))?\s*$")


def parse_scalar(text: str) -> float:
    """Float or a multiple of pi such as ``pi/80`` or ``2pi/80``."""
    match = _PI_MULTIPLE.match(text)
    if match is None:
        try:
            return float(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    coef = float(match["coef"]) if match["coef"] else 1.0
    div = float(match["div"]) if match["div"] else 1.0
    return coef * math.pi / div


def parse_grid(text: str) -> list[float]:
    """Comma-separated list of :func:`parse_scalar` values."""
    return [parse_scalar(item) for item in text.split(",") if item.strip()]


def parse_positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def load_campaign_config(args: argparse.Namespace, settings: Settings) -> CampaignConfig:
    """CampaignConfig from ``--config`` (if any), settings defaults and flag overrides.

    Raises:
        ConfigurationError: unreadable file or invalid fields.
    """
    data: dict[str, Any] = {}
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ConfigurationError(f"config file not found: {args.config}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config file {args.config} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigurationError("config file must hold a JSON object")

    data.setdefault("workers", settings.workers)
    data.setdefault("max_failure_fraction", settings.max_failure_fraction)
    data.setdefault("output_path", str(settings.output_dir / "records.csv"))
    witness = data.setdefault("witness", {})
    if isinstance(witness, dict):
        witness.setdefault("restarts", settings.witness_restarts)
        if settings.b_cache_path is not None:
            witness["b_cache"] = {**load_b_cache(settings.b_cache_path), **witness.get("b_cache", {})}

    if args.seed is not None:
        data["master_seed"] = args.seed
    if args.workers is not None:
        data["workers"] = args.workers
    if getattr(args, "skip_tau", False):
        data["skip_tau"] = True
    if getattr(args, "tau_subsample", None) is not None:
        data["tau_subsample"] = args.tau_subsample
    if getattr(args, "n_networks", None) is not None:
        data["n_networks"] = args.n_networks

    try:
        return CampaignConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(f"invalid campaign config: {exc}") from exc


def _emit(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, sort_keys=True))


def _finite(value: float) -> float | None:
    return value if math.isfinite(value) else None


def cmd_gen(args: argparse.Namespace, settings: Settings) -> int:
    cfg = load_campaign_config(args, settings)
    out = Path(args.out) if args.out else settings.output_dir / "geometries.jsonl"
    count = write_geometries((network_geometry(cfg, i) for i in range(cfg.n_networks)), out)
    _emit({"networks": count, "path": str(out)})
    return 0


def cmd_run(args: argparse.Namespace, settings: Settings) -> int:
    cfg = load_campaign_config(args, settings)
    if args.out:
        cfg = cfg.model_copy(update={"output_path": Path(args.out)})
    records = run_campaign(cfg)
    if settings.b_cache_path is not None and cfg.witness.b_cache:
        save_b_cache(cfg.witness, settings.b_cache_path)
    _emit(
        {
            "records": len(records),
            "failures": sum(r.failed for r in records),
            "path": str(cfg.output_path),
            "metadata": str(cfg.metadata_path),
        }
    )
    return 0


def cmd_sweep(args: argparse.Namespace, settings: Settings) -> int:
    cfg = load_campaign_config(args, settings)
    rec_lifetimes = parse_grid(args.rec_lifetimes)
    if any(x <= 0 for x in rec_lifetimes):
        raise ConfigurationError("recombination lifetimes must be positive")
    t_grid = parse_grid(args.t_grid)
    result = sweep_correlation(cfg, [1.0 / x for x in rec_lifetimes], t_grid)
    table = Path(args.out) if args.out else settings.output_dir / "sweep.csv"
    summary = table.with_suffix(".json")
    write_sweep(result, table, summary)
    _emit(
        {
            "points": len(result.points),
            "argmax_inverse_gamma_rec": {repr(t): v for t, v in result.row_argmax().items()},
            "table": str(table),
            "summary": str(summary),
        }
    )
    return 0


def _metadata_bin_width(records_path: Path) -> float | None:
    meta = records_path.with_suffix(".meta.json")
    if not meta.exists():
        return None
    value = json.loads(meta.read_text(encoding="utf-8")).get("bin_width")
    return float(value) if value is not None else None


def cmd_analyze(args: argparse.Namespace, settings: Settings) -> int:
    records_path = Path(args.records)
    records = read_records(records_path)
    width = args.bin_width or _metadata_bin_width(records_path) or CampaignConfig.model_fields["bin_width"].default
    usable = [r for r in records if math.isfinite(r.e_s) and math.isfinite(r.e_t)]
    try:
        kappa: float | None = pearson([r.e_t for r in usable], [r.e_s for r in usable])
    except StatisticsError as exc:
        logger.warning("kappa undefined", extra={"detail": str(exc)})
        kappa = None

    k_list = sorted({k for r in records for k in r.tau})
    bins = bin_by_efficiency(records, width, args.min_bin_count)
    table = binned_tau_table(records, k_list, width, args.min_bin_count)
    out = Path(args.out) if args.out else records_path.with_name(records_path.stem + ".bins.csv")
    write_binned_table(out, bins, table, detect_threshold=args.detect_threshold)
    _emit(
        {
            "kappa": kappa,
            "n": len(usable),
            "bins": len(bins),
            "bin_width": width,
            "max_e_s": _finite(max((r.e_s for r in usable), default=math.nan)),
            "table": str(out),
        }
    )
    return 0


def cmd_fractions(args: argparse.Namespace, settings: Settings) -> int:
    records = read_records(Path(args.records))
    low, high = coherence_fractions(records, args.k, args.threshold, args.e_s_cut, args.high_cut)
    payload = {"k": args.k, "threshold": args.threshold, "e_s_cut": args.e_s_cut, "low": low, "high": high}
    if args.out:
        write_json(payload, Path(args.out))
    _emit(payload)
    return 0


def cmd_validate2exc(args: argparse.Namespace, settings: Settings) -> int:
    cfg = load_campaign_config(args, settings)
    count = min(args.count, cfg.n_networks)
    ratios = []
    for index in range(count):
        check = validate_single_excitation(network_geometry(cfg, index), cfg.rates)
        ratios.append(check.ratio)
        logger.debug("double excitation check", extra={"index": index, "ratio": check.ratio})
    worst = float(np.max(ratios))
    payload = {
        "networks": count,
        "seeds": [mix_seed(cfg.master_seed, i) for i in range(count)],
        "max_ratio": worst,
        "mean_ratio": float(np.mean(ratios)),
        "limit": DOUBLE_EXCITATION_LIMIT,
        "passed": worst < DOUBLE_EXCITATION_LIMIT,
    }
    if args.out:
        write_json(payload, Path(args.out))
    _emit({k: v for k, v in payload.items() if k != "seeds"})
    return 0 if payload["passed"] else 1


def cmd_thresholds(args: argparse.Namespace, settings: Settings) -> int:
    cfg = load_campaign_config(args, settings)
    rows = witness_thresholds(cfg.n_sites, cfg.k_list, cfg.witness)
    if args.out:
        write_table(Path(args.out), ["k", "k_prime", "tau"], rows)
    _emit({"n_sites": cfg.n_sites, "thresholds": [{"k": k, "k_prime": kp, "tau": v} for k, kp, v in rows]})
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with CampaignConfig fields.")
    common.add_argument("--seed", type=int, help="Master seed (overrides the config).")
    common.add_argument("--workers", type=int, help="Worker processes (overrides the config).")
    common.add_argument("--out", help="Output path of the command.")
    common.add_argument("--log-level", help="Log level (default: EXCITON_LOG_LEVEL or INFO).")

    parser = argparse.ArgumentParser(
        prog="exciton-network",
        description="Stationary transport and coherence in random driven quantum networks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="Sample network geometries (JSON lines).")
    gen.add_argument("--n-networks", type=int, help="Number of geometries (overrides the config).")
    gen.set_defaults(handler=cmd_gen)

    run = sub.add_parser("run", parents=[common], help="Run a campaign and write the record file.")
    run.add_argument("--n-networks", type=int, help="Number of networks (overrides the config).")
    run.add_argument("--skip-tau", action="store_true", help="Skip witness evaluation.")
    run.add_argument("--tau-subsample", type=float, help="Evaluate tau on this random fraction of networks.")
    run.set_defaults(handler=cmd_run)

    sweep = sub.add_parser("sweep", parents=[common], help="kappa(E_t, E_s) over gamma_rec^-1 and T grids.")
    sweep.add_argument("--n-networks", type=int, help="Number of networks (overrides the config).")
    sweep.add_argument("--rec-lifetimes", default="0.03,0.05,0.1", help="gamma_rec^-1 grid (default: %(default)s).")
    sweep.add_argument("--t-grid", default="pi/80,pi/40", help="T grid, 'pi/80' style allowed (default: %(default)s).")
    sweep.set_defaults(handler=cmd_sweep)

    analyze = sub.add_parser("analyze", parents=[common], help="Correlation and binned tau tables of a record file.")
    analyze.add_argument("records", help="Record CSV written by 'run'.")
    analyze.add_argument("--bin-width", type=float, help="E_s bin width (default: from metadata, else 0.01).")
    analyze.add_argument("--min-bin-count", type=int, default=50, help="Merge sparser top bins (default: 50).")
    analyze.add_argument("--detect-threshold", type=float, help="Add per-bin fractions of tau_K above this value.")
    analyze.set_defaults(handler=cmd_analyze)

    fractions = sub.add_parser("fractions", parents=[common], help="Share of coherent low/high-efficiency networks.")
    fractions.add_argument("records", help="Record CSV written by 'run'.")
    fractions.add_argument("--k", type=int, default=3, help="Witness order K (default: 3).")
    fractions.add_argument("--threshold", type=float, default=0.5, help="tau_K threshold (default: 0.5).")
    fractions.add_argument("--e-s-cut", type=float, default=0.05, help="Upper E_s of the low group (default: 0.05).")
    fractions.add_argument(
        "--high-cut", type=float, default=HIGH_EFFICIENCY_CUT, help="Lower E_s of the high group (default: 0.15)."
    )
    fractions.set_defaults(handler=cmd_fractions)

    validate = sub.add_parser("validate2exc", parents=[common], help="Check the single-excitation truncation.")
    validate.add_argument("--count", type=parse_positive_int, default=100, help="Networks to check (default: 100).")
    validate.set_defaults(handler=cmd_validate2exc)

    thresholds = sub.add_parser("thresholds", parents=[common], help="tau_K of the W states W_K'.")
    thresholds.set_defaults(handler=cmd_thresholds)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    setup_logging(args.log_level or settings.log_level)
    try:
        return int(args.handler(args, settings))
    except ExcitonNetworkError as exc:
        logger.error("command failed", extra={"command": args.command, "error": type(exc).__name__})
        print(json.dumps({"error": {"message": exc.message, "type": type(exc).__name__}}), file=sys.stderr)
        return exc.exit_code
