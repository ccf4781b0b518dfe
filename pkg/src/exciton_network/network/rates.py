"""Incoherent rates driving and draining the network."""

from __future__ import annotations

import logging
import math
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field, model_validator

logger = logging.getLogger(__name__)

NonNegative = Annotated[float, Field(ge=0.0)]

# Reference rates (inverse scaled time).
DEFAULT_GAMMA_IN = 2e-4
DEFAULT_GAMMA_OUT = 20.0
DEFAULT_GAMMA_REC = 20.0


class RateSet(BaseModel):
    """Injection, sink, recombination and dephasing rates."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma_in: NonNegative = DEFAULT_GAMMA_IN
    gamma_out: NonNegative = DEFAULT_GAMMA_OUT
    gamma_rec: NonNegative = DEFAULT_GAMMA_REC
    gamma_deph: NonNegative = 0.0

    @model_validator(mode="after")
    def _warn_double_excitations(self) -> "RateSet":
        """The {0,1}-excitation truncation assumes injection much slower than extraction."""
        if self.gamma_in > 0 and self.gamma_in >= self.gamma_out:
            logger.warning(
                "gamma_in=%g >= gamma_out=%g: double excitations are not negligible "
                "and the single-excitation truncation is unreliable.",
                self.gamma_in,
                self.gamma_out,
            )
        return self

    @property
    def excitation_lifetime(self) -> float:
        """Recombination-limited lifetime 1/gamma_rec (inf when gamma_rec = 0)."""
        return math.inf if self.gamma_rec == 0 else 1.0 / self.gamma_rec

    @property
    def coherence_time(self) -> float:
        """Lifetime 1/(4 gamma_deph) of inter-site coherences |i><j| under dephasing alone.

        With sigma_z dephasing on every site, |i><j| picks up a 2 gamma_deph
        loss from each of sites i and j. Coherences |0><i| with the ground state
        lose only 2 gamma_deph and live twice as long.
        """
        return math.inf if self.gamma_deph == 0 else 1.0 / (4.0 * self.gamma_deph)

    def with_recombination(self, gamma_rec: float) -> "RateSet":
        return self.model_copy(update={"gamma_rec": gamma_rec})
