"""Tests for record files and analysis tables."""

import math
from pathlib import Path

import pytest

from exciton_network.analysis.binning import bin_by_efficiency, binned_tau_table
from exciton_network.campaign.storage import (
    RecordWriter,
    read_geometries,
    read_records,
    record_columns,
    tau_columns,
    write_binned_table,
    write_geometries,
    write_records,
)
from exciton_network.errors import ConfigurationError
from exciton_network.network.geometry import sample_geometry
from exciton_network.schemas.record import NetworkRecord

HEADER = "index,seed,e_s,e_t,j_in,j_rec,j_out,tau2,tau3,tau4,weight_1exc,flags"


def _record(index: int, **overrides: object) -> NetworkRecord:
    values: dict[str, object] = {
        "index": index,
        "seed": 2**63 + index,
        "e_s": 0.1 / (index + 3),
        "e_t": 1.0 / 3.0,
        "j_in": 2e-4,
        "j_rec": 1.7e-4,
        "j_out": 3e-5,
        "tau": {2: 0.125, 3: -0.5, 4: -1.0 / 7.0},
        "weight_1exc": 0.9999,
    }
    values.update(overrides)
    return NetworkRecord.model_validate(values)


class TestRecordFile:
    def test_header(self, tmp_path: Path) -> None:
        path = tmp_path / "records.csv"
        write_records([_record(0)], path, [2, 3, 4])
        assert path.read_text().splitlines()[0] == HEADER
        assert ",".join(record_columns([2, 3, 4])) == HEADER

    def test_values_preserved(self, tmp_path: Path) -> None:
        path = tmp_path / "records.csv"
        original = _record(4, flags=frozenset({"tau_order", "geometry_resampled"}))
        write_records([original], path, [2, 3, 4])

        (loaded,) = read_records(path)
        assert loaded == original

    def test_rewrite_is_byte_stable(self, tmp_path: Path) -> None:
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        write_records([_record(i) for i in range(5)], first, [2, 3, 4])
        write_records(read_records(first), second, [2, 3, 4])
        assert first.read_bytes() == second.read_bytes()

    def test_failed_record(self, tmp_path: Path) -> None:
        path = tmp_path / "records.csv"
        write_records([NetworkRecord(index=0, seed=5, flags=frozenset({"failed:SteadyStateError"}))], path, [2])

        (loaded,) = read_records(path)
        assert loaded.failed
        assert math.isnan(loaded.e_s)
        assert loaded.tau == {}
        assert "nan" in path.read_text().splitlines()[1]

    def test_flags_sorted_and_joined(self, tmp_path: Path) -> None:
        path = tmp_path / "records.csv"
        write_records([_record(0, flags=frozenset({"tau_order", "geometry_resampled"}))], path, [2, 3, 4])
        assert path.read_text().splitlines()[1].endswith(",geometry_resampled;tau_order")

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigurationError, match="not found"):
            read_records(tmp_path / "absent.csv")

    def test_tau_columns(self, tmp_path: Path) -> None:
        path = tmp_path / "records.csv"
        write_records([_record(0)], path, [2, 4])
        assert tau_columns(path) == [2, 4]


class TestRecordWriter:
    def test_finalize_sorts_by_index(self, tmp_path: Path) -> None:
        path = tmp_path / "out" / "records.csv"
        with RecordWriter(path, [2, 3, 4]) as sink:
            for index in (3, 0, 2, 1):
                sink.append(_record(index))
            assert sink.count == 4
        records = sink.finalize()

        assert [r.index for r in records] == [0, 1, 2, 3]
        assert [r.index for r in read_records(path)] == [0, 1, 2, 3]
        assert not path.with_name("records.csv.tmp").exists()

    def test_partial_file_readable(self, tmp_path: Path) -> None:
        path = tmp_path / "records.csv"
        with RecordWriter(path, [2, 3, 4]) as sink:
            sink.append(_record(7))
            assert [r.index for r in read_records(path)] == [7]

    def test_append_outside_context(self, tmp_path: Path) -> None:
        with pytest.raises(RuntimeError):
            RecordWriter(tmp_path / "records.csv", [2]).append(_record(0))


def test_geometries_jsonl(tmp_path: Path) -> None:
    geometries = [sample_geometry(5, seed, 0.05) for seed in (1, 2, 3)]
    path = tmp_path / "geometries.jsonl"

    assert write_geometries(geometries, path) == 3
    assert read_geometries(path) == geometries


def test_binned_table_columns(tmp_path: Path) -> None:
    records = [_record(i, e_s=0.005 + 0.01 * (i % 2), tau={2: 0.1 * i, 3: -0.1 * i}) for i in range(8)]
    bins = bin_by_efficiency(records, 0.01)
    table = binned_tau_table(records, [2, 3], 0.01)
    path = tmp_path / "records.bins.csv"

    write_binned_table(path, bins, table, detect_threshold=0.0)

    lines = path.read_text().splitlines()
    assert lines[0] == (
        "bin_center,width,n,mean_tau_2,sigma_2,se_mean_2,se_sigma_2,frac_above_2,"
        "mean_tau_3,sigma_3,se_mean_3,se_sigma_3,frac_above_3"
    )
    assert len(lines) == 3
    assert lines[1].split(",")[2] == "4"
