"""Tests for random network geometries."""

import json
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.spatial.distance import pdist

from exciton_network.errors import InfeasibleSeparationError
from exciton_network.network.geometry import (
    BALL_RADIUS,
    DEFAULT_MIN_SEPARATION,
    NetworkGeometry,
    Position,
    load_geometry,
    sample_geometry,
    save_geometry,
)
from exciton_network.network.seeding import mix_seed


class TestSampleGeometry:
    @pytest.mark.parametrize("n_sites", [2, 3, 7, 9, 12])
    def test_poles_and_ball(self, n_sites: int) -> None:
        """Site 1 and N sit on the poles; every site lies inside the ball."""
        geometry = sample_geometry(n_sites, seed=99)
        positions = geometry.array()

        assert positions.shape == (n_sites, 3)
        np.testing.assert_array_equal(positions[0], [0.0, 0.0, -0.5])
        np.testing.assert_array_equal(positions[-1], [0.0, 0.0, 0.5])
        assert np.all(np.linalg.norm(positions, axis=1) <= BALL_RADIUS + 1e-12)

    def test_same_seed_same_geometry(self) -> None:
        assert sample_geometry(7, seed=5) == sample_geometry(7, seed=5)

    def test_different_seed_different_geometry(self) -> None:
        assert sample_geometry(7, seed=5).positions != sample_geometry(7, seed=6).positions

    def test_min_separation_respected(self) -> None:
        for seed in range(20):
            geometry = sample_geometry(7, seed=seed, min_separation=0.2)
            assert geometry.pairwise_distances().min() >= 0.2

    def test_invariants_over_many_seeds(self) -> None:
        for seed in range(1_000):
            positions = sample_geometry(7, seed=mix_seed(2024, seed)).array()
            assert tuple(positions[0]) == (0.0, 0.0, -0.5)
            assert tuple(positions[-1]) == (0.0, 0.0, 0.5)
            assert np.all(np.linalg.norm(positions, axis=1) <= BALL_RADIUS + 1e-12)
            assert pdist(positions).min() >= DEFAULT_MIN_SEPARATION

    def test_two_sites_need_no_sampling(self) -> None:
        geometry = sample_geometry(2, seed=1, min_separation=0.4)
        assert geometry.resample_count == 0
        assert geometry.pairwise_distances().tolist() == [1.0]

    def test_infeasible_separation(self) -> None:
        """Twelve sites cannot be 0.49 apart in a ball of diameter 1."""
        with pytest.raises(InfeasibleSeparationError) as exc_info:
            sample_geometry(12, seed=0, min_separation=0.49, max_resamples=20)
        assert exc_info.value.exit_code == 1

    def test_tight_separation_resamples(self) -> None:
        counts = [sample_geometry(7, seed=s, min_separation=0.3).resample_count for s in range(10)]
        assert max(counts) > 0

    @pytest.mark.parametrize(("n_sites", "min_separation"), [(1, 1e-3), (7, 0.5), (7, -0.1)])
    def test_invalid_arguments(self, n_sites: int, min_separation: float) -> None:
        with pytest.raises(ValueError):
            sample_geometry(n_sites, seed=0, min_separation=min_separation)


class TestNetworkGeometry:
    def test_position_count_must_match(self) -> None:
        with pytest.raises(ValidationError):
            NetworkGeometry(n_sites=3, seed=0, positions=((0.0, 0.0, -0.5), (0.0, 0.0, 0.5)))

    def test_permuted_keeps_poles(self) -> None:
        geometry = sample_geometry(5, seed=3)
        permuted = geometry.permuted([3, 1, 2])

        assert permuted.positions[0] == geometry.positions[0]
        assert permuted.positions[-1] == geometry.positions[-1]
        assert permuted.positions[1] == geometry.positions[3]

    def test_permuted_rejects_pole_indices(self) -> None:
        with pytest.raises(ValueError, match="permute"):
            sample_geometry(4, seed=0).permuted([0, 1])

    def test_json_file_round_trip(self, tmp_path: Path) -> None:
        geometry = sample_geometry(7, seed=11)
        path = tmp_path / "geometry.json"

        save_geometry(geometry, path)

        assert load_geometry(path) == geometry

    @pytest.mark.parametrize(
        "positions",
        [
            ((0.0, 0.0, -0.4), (0.0, 0.1, 0.0), (0.0, 0.0, 0.5)),
            ((0.0, 0.0, -0.5), (0.0, 0.1, 0.0), (0.1, 0.0, 0.5)),
            ((0.0, 0.0, -0.5), (0.4, 0.4, 0.0), (0.0, 0.0, 0.5)),
        ],
        ids=["input_off_pole", "output_off_pole", "outside_ball"],
    )
    def test_invalid_positions_rejected_on_load(self, tmp_path: Path, positions: tuple[Position, ...]) -> None:
        path = tmp_path / "geometry.json"
        path.write_text(json.dumps({"n_sites": 3, "seed": 0, "positions": positions}))

        with pytest.raises(ValidationError):
            load_geometry(path)
