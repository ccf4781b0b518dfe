"""Campaign configuration schema."""

import hashlib
import math
from pathlib import Path
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from exciton_network.coherence.optimizer import WitnessConfig
from exciton_network.network.geometry import DEFAULT_MIN_SEPARATION
from exciton_network.network.rates import RateSet

TransientMode = Literal["coherent", "liouvillian"]

# Largest network the dense (N+1)^2 solver is sized for.
MAX_SITES = 12


class CampaignConfig(BaseModel):
    """Everything that determines the records of a campaign.

    JSON config files map one-to-one onto these fields; unknown keys are
    rejected.
    """

    model_config = ConfigDict(extra="forbid")

    n_sites: Annotated[int, Field(ge=2, le=MAX_SITES)] = 7
    n_networks: Annotated[int, Field(ge=1)] = 10_000
    master_seed: Annotated[int, Field(ge=0, lt=2**64)] = 0
    rates: RateSet = Field(default_factory=RateSet)
    t_weight: Annotated[float, Field(gt=0.0)] = math.pi / 80
    k_list: list[int] = Field(default_factory=lambda: [2, 3, 4])
    witness: WitnessConfig = Field(default_factory=WitnessConfig)
    bin_width: Annotated[float, Field(gt=0.0)] = 0.01
    min_separation: Annotated[float, Field(ge=0.0, lt=0.5)] = DEFAULT_MIN_SEPARATION
    output_path: Path = Path("records.csv")
    workers: Annotated[int, Field(ge=1)] = 1

    # Execution modes
    skip_tau: bool = False
    tau_subsample: Annotated[float, Field(gt=0.0, le=1.0)] = 1.0
    transient_mode: TransientMode = "coherent"
    min_bin_count: Annotated[int, Field(ge=1)] = 50
    max_failure_fraction: Annotated[float, Field(ge=0.0, le=1.0)] = 0.01

    @field_validator("k_list")
    @classmethod
    def _sorted_unique(cls, v: list[int]) -> list[int]:
        return sorted(set(v))

    @model_validator(mode="after")
    def _check_consistency(self) -> "CampaignConfig":
        bad = [k for k in self.k_list if not 2 <= k <= self.n_sites]
        if bad:
            raise ValueError(f"k_list entries {bad} outside [2, {self.n_sites}]")
        if self.rates.gamma_in <= 0:
            raise ValueError("campaigns need gamma_in > 0 for a defined stationary efficiency")
        return self

    def config_hash(self) -> str:
        """sha256 over the canonical JSON of the fields that affect records.

        Cached witness normalizations are derived from the witness settings
        and left out, as are the worker count and output location.
        """
        canonical = self.model_dump_json(exclude={"workers": True, "output_path": True, "witness": {"b_cache": True}})
        return hashlib.sha256(canonical.encode()).hexdigest()

    @property
    def metadata_path(self) -> Path:
        return self.output_path.with_suffix(".meta.json")
