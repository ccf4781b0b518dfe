"""Ensemble statistics: correlation and per-bin moments of the witness.

Bin spreads use the population (biased) standard deviation. The error of
the spread follows the delta method, S(sigma) = Sigma(sigma^2) / (2 sigma),
with the variance of the sample variance

    Sigma^2(sigma^2) = (mu_4 - sigma^4 (n - 3) / (n - 1)) / n.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike
from scipy import stats as sps

from exciton_network.errors import StatisticsError

# Negative variance-of-variance values above this (relative to sigma^4) are rounding.
_ROUNDING_TOL = 1e-12


@dataclass(frozen=True)
class BinStats:
    """Moments of the witness values of one efficiency bin."""

    n: int
    mean_tau: float
    sigma: float
    se_mean: float
    se_sigma: float
    mu4: float
    variance_of_variance: float
    center: float = math.nan
    width: float = math.nan
    flags: frozenset[str] = field(default_factory=frozenset)

    @property
    def significant(self) -> bool:
        """Bin mean exceeds the spread of the bin."""
        return abs(self.mean_tau) > self.sigma


def pearson(xs: ArrayLike, ys: ArrayLike) -> float:
    """Pearson correlation coefficient of two equally long samples.

    Raises:
        StatisticsError: lengths differ, fewer than two points, or a constant sample.
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise StatisticsError(f"samples must be 1-D and equally long, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise StatisticsError("correlation needs at least two points")
    if np.std(x) == 0.0 or np.std(y) == 0.0:
        raise StatisticsError("correlation is undefined for a constant sample")
    return float(np.clip(np.corrcoef(x, y)[0, 1], -1.0, 1.0))


def bin_stats(values: ArrayLike) -> BinStats:
    """Mean, spread, fourth central moment and their statistical errors.

    Raises:
        StatisticsError: fewer than two values, or a negative variance of the
            sample variance beyond rounding.
    """
    sample = np.asarray(values, dtype=np.float64)
    n = int(sample.size)
    if n < 2:
        raise StatisticsError(f"bin statistics need at least 2 values, got {n}")

    mean = float(np.mean(sample))
    sigma = float(np.std(sample))
    mu4 = float(sps.moment(sample, 4))
    se_mean = sigma / math.sqrt(n)
    flags: set[str] = set()

    variance_of_variance = math.nan
    se_sigma = math.nan
    if n < 4:
        flags.add("se_sigma_undefined")
    else:
        variance_of_variance = (mu4 - sigma**4 * (n - 3) / (n - 1)) / n
        if variance_of_variance < 0:
            if variance_of_variance < -_ROUNDING_TOL * max(sigma**4, np.finfo(float).tiny):
                raise StatisticsError(
                    f"negative variance of the sample variance {variance_of_variance:.3e} "
                    f"(n={n}, sigma={sigma:.3e}, mu4={mu4:.3e})"
                )
            variance_of_variance = 0.0
        if sigma > 0:
            se_sigma = math.sqrt(variance_of_variance) / (2.0 * sigma)
        else:
            flags.add("se_sigma_undefined")

    return BinStats(
        n=n,
        mean_tau=mean,
        sigma=sigma,
        se_mean=se_mean,
        se_sigma=se_sigma,
        mu4=mu4,
        variance_of_variance=variance_of_variance,
        flags=frozenset(flags),
    )


def empty_bin_stats(n: int) -> BinStats:
    """Placeholder for bins too small for :func:`bin_stats`."""
    return BinStats(
        n=n,
        mean_tau=math.nan,
        sigma=math.nan,
        se_mean=math.nan,
        se_sigma=math.nan,
        mu4=math.nan,
        variance_of_variance=math.nan,
        flags=frozenset({"insufficient_n"}),
    )


def is_monotone_increasing(values: Sequence[float], *, strict: bool = False) -> bool:
    """True when consecutive values never decrease (never stay equal if ``strict``)."""
    steps = np.diff(np.asarray(values, dtype=np.float64))
    return bool(np.all(steps > 0)) if strict else bool(np.all(steps >= 0))
