"""Record files, campaign metadata and analysis tables on disk.

Record CSV layout::

    index,seed,e_s,e_t,j_in,j_rec,j_out,tau2,tau3,tau4,weight_1exc,flags

with one ``tau<K>`` column per K of the campaign, floats written with
``repr`` (shortest round-trip form) and flags as sorted ``;``-joined tokens.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
from collections.abc import Iterable, Iterator, Mapping, Sequence
from pathlib import Path
from types import TracebackType
from typing import IO, Any

from exciton_network.analysis.binning import EfficiencyBin, bin_fraction_above
from exciton_network.analysis.stats import BinStats
from exciton_network.errors import ConfigurationError
from exciton_network.network.geometry import NetworkGeometry
from exciton_network.schemas.record import NetworkRecord

logger = logging.getLogger(__name__)

_LEADING_COLUMNS = ["index", "seed", "e_s", "e_t", "j_in", "j_rec", "j_out"]
_TRAILING_COLUMNS = ["weight_1exc", "flags"]
_FLAG_SEPARATOR = ";"


def record_columns(k_list: Sequence[int]) -> list[str]:
    """CSV header for a campaign evaluating tau_K for ``k_list``."""
    return [*_LEADING_COLUMNS, *(f"tau{k}" for k in k_list), *_TRAILING_COLUMNS]


def _format_float(value: float) -> str:
    return repr(float(value))


def _record_row(record: NetworkRecord, k_list: Sequence[int]) -> list[str]:
    row = [str(record.index), str(record.seed)]
    row += [_format_float(getattr(record, name)) for name in _LEADING_COLUMNS[2:]]
    row += [_format_float(record.tau.get(k, math.nan)) for k in k_list]
    row += [_format_float(record.weight_1exc), _FLAG_SEPARATOR.join(sorted(record.flags))]
    return row


def _parse_row(row: Mapping[str, str]) -> NetworkRecord:
    tau = {int(name[3:]): float(value) for name, value in row.items() if name.startswith("tau")}
    flags = row["flags"]
    return NetworkRecord(
        index=int(row["index"]),
        seed=int(row["seed"]),
        e_s=float(row["e_s"]),
        e_t=float(row["e_t"]),
        j_in=float(row["j_in"]),
        j_rec=float(row["j_rec"]),
        j_out=float(row["j_out"]),
        tau={k: v for k, v in tau.items() if not math.isnan(v)},
        weight_1exc=float(row["weight_1exc"]),
        flags=frozenset(flags.split(_FLAG_SEPARATOR)) if flags else frozenset(),
    )


class RecordWriter:
    """Append-only record sink; :meth:`finalize` rewrites it sorted by index."""

    def __init__(self, path: Path, k_list: Sequence[int]) -> None:
        self.path = path
        self.k_list = list(k_list)
        self._handle: IO[str] | None = None
        self._writer: Any = None
        self.count = 0

    def __enter__(self) -> RecordWriter:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._handle = self.path.open("w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._handle, lineterminator="\n")
        self._writer.writerow(record_columns(self.k_list))
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    def append(self, record: NetworkRecord) -> None:
        if self._handle is None:
            raise RuntimeError("RecordWriter used outside its context")
        self._writer.writerow(_record_row(record, self.k_list))
        self._handle.flush()
        self.count += 1

    def finalize(self) -> list[NetworkRecord]:
        """Sort the written records by index and rewrite the file in place."""
        records = sorted(read_records(self.path), key=lambda r: r.index)
        write_records(records, self.path, self.k_list)
        return records


def write_records(records: Iterable[NetworkRecord], path: Path, k_list: Sequence[int]) -> None:
    """Write a complete record file (atomically replaces ``path``)."""
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(record_columns(k_list))
        for record in records:
            writer.writerow(_record_row(record, k_list))
    os.replace(tmp, path)


def iter_records(path: Path) -> Iterator[NetworkRecord]:
    with path.open(newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            yield _parse_row(row)


def read_records(path: Path) -> list[NetworkRecord]:
    """Parse a record file.

    Raises:
        ConfigurationError: the file does not exist.
    """
    if not path.exists():
        raise ConfigurationError(f"record file not found: {path}")
    return list(iter_records(path))


def tau_columns(path: Path) -> list[int]:
    """K values present as ``tau<K>`` columns of a record file."""
    with path.open(newline="", encoding="utf-8") as f:
        header = next(csv.reader(f), [])
    return [int(name[3:]) for name in header if name.startswith("tau")]


def write_json(payload: Mapping[str, Any], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_geometries(geometries: Iterable[NetworkGeometry], path: Path) -> int:
    """Write geometries as JSON lines; returns the number written."""
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", encoding="utf-8") as f:
        for geometry in geometries:
            f.write(geometry.model_dump_json() + "\n")
            count += 1
    return count


def read_geometries(path: Path) -> list[NetworkGeometry]:
    with path.open(encoding="utf-8") as f:
        return [NetworkGeometry.model_validate_json(line) for line in f if line.strip()]


def write_binned_table(
    path: Path,
    bins: Sequence[EfficiencyBin],
    table: Mapping[int, Sequence[BinStats]],
    detect_threshold: float | None = None,
) -> None:
    """Binned tau table: one row per E_s bin, one column group per K."""
    k_list = sorted(table)
    header = ["bin_center", "width", "n"]
    for k in k_list:
        header += [f"mean_tau_{k}", f"sigma_{k}", f"se_mean_{k}", f"se_sigma_{k}"]
        if detect_threshold is not None:
            header.append(f"frac_above_{k}")

    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for i, efficiency_bin in enumerate(bins):
            row = [_format_float(efficiency_bin.center), _format_float(efficiency_bin.width), str(efficiency_bin.n)]
            for k in k_list:
                stats = table[k][i]
                row += [_format_float(v) for v in (stats.mean_tau, stats.sigma, stats.se_mean, stats.se_sigma)]
                if detect_threshold is not None:
                    row.append(_format_float(bin_fraction_above(efficiency_bin, k, detect_threshold)))
            writer.writerow(row)
    logger.info("wrote binned table", extra={"path": str(path), "bins": len(bins)})


def write_table(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Generic CSV table; floats use the round-trip format."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_float(v) if isinstance(v, float) else v for v in row])
