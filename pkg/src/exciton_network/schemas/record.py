"""Per-network result record."""

import math
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field, field_validator

# Slack for efficiencies that land a rounding error outside [0, 1].
_RANGE_SLACK = 1e-9


class NetworkRecord(BaseModel):
    """Results for one network of a campaign.

    Failed networks carry NaN quantities and a ``failed:<ErrorType>`` flag.
    """

    model_config = ConfigDict(frozen=True)

    index: Annotated[int, Field(ge=0)]
    seed: Annotated[int, Field(ge=0, lt=2**64)]
    e_s: float = math.nan
    e_t: float = math.nan
    j_in: float = math.nan
    j_rec: float = math.nan
    j_out: float = math.nan
    tau: dict[int, float] = Field(default_factory=dict)
    weight_1exc: float = math.nan
    flags: frozenset[str] = frozenset()

    @field_validator("e_s", "e_t")
    @classmethod
    def _efficiency_range(cls, v: float) -> float:
        if not math.isnan(v) and not -_RANGE_SLACK <= v <= 1.0 + _RANGE_SLACK:
            raise ValueError(f"efficiency {v} outside [0, 1]")
        return v

    @property
    def failed(self) -> bool:
        return any(flag.startswith("failed") for flag in self.flags)

    @property
    def flux_imbalance(self) -> float:
        return self.j_in - self.j_rec - self.j_out
