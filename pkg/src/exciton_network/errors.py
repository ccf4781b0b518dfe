"""Error hierarchy shared by the library and the CLI."""

from __future__ import annotations


class ExcitonNetworkError(Exception):
    """Base exception for exciton-network."""

    def __init__(self, message: str, exit_code: int = 1):
        self.message = message
        self.exit_code = exit_code
        super().__init__(message)


class ConfigurationError(ExcitonNetworkError):
    """Invalid campaign or command configuration."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class DegenerateGeometryError(ExcitonNetworkError):
    """Two sites coincide, so the dipolar coupling diverges."""

    def __init__(self, i: int, j: int):
        self.sites = (i, j)
        super().__init__(f"sites {i + 1} and {j + 1} coincide; coupling is undefined")


class InfeasibleSeparationError(ExcitonNetworkError):
    """Rejection sampling could not honour the minimum separation."""

    def __init__(self, n_sites: int, min_separation: float, attempts: int):
        super().__init__(
            f"no {n_sites}-site geometry with min_separation={min_separation} "
            f"found after {attempts} resamples"
        )


class DimensionMismatchError(ExcitonNetworkError):
    """Operators passed to a builder disagree on the Hilbert-space dimension."""


class SteadyStateError(ExcitonNetworkError):
    """The stationary solve failed one of its a-posteriori checks."""


class TransientError(ExcitonNetworkError):
    """A transient efficiency came out with a non-negligible imaginary part."""

    def __init__(self, imaginary: float):
        self.imaginary = imaginary
        super().__init__(f"transient efficiency has imaginary part {imaginary:.3e}")


class ZeroWeightError(ExcitonNetworkError):
    """The single-excitation sector carries no population to renormalize."""

    def __init__(self, weight: float, floor: float):
        self.weight = weight
        super().__init__(f"single-excitation weight {weight:.3e} is below floor {floor:.1e}")


class StatisticsError(ExcitonNetworkError):
    """A statistic is undefined for the given sample."""


class WitnessCalibrationError(ExcitonNetworkError):
    """The W-state maximum used for normalization was not positive."""

    def __init__(self, k: int, n_sites: int, maximum: float):
        super().__init__(
            f"witness calibration for K={k}, N={n_sites} found non-positive maximum {maximum:.3e}"
        )


class CampaignAbortedError(ExcitonNetworkError):
    """Too many networks in a campaign failed."""

    def __init__(self, failed: int, total: int, limit: float):
        self.failed = failed
        self.total = total
        super().__init__(
            f"{failed} of {total} networks failed, above the allowed fraction {limit:.2%}",
            exit_code=3,
        )
