"""Per-network substream seeding.

Network ``i`` of a campaign with master seed ``m`` uses

    seed_i = splitmix64(m + (i + 1) * 0x9E3779B97F4A7C15  mod 2**64)

where ``splitmix64`` is the finalizer of Steele, Lea & Flood's SplitMix64
generator. The mapping depends only on ``(m, i)``, so records are
reproducible regardless of worker count or completion order.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer on a 64-bit unsigned integer."""
    z = x & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix_seed(master_seed: int, index: int) -> int:
    """Seed of network ``index`` within a campaign seeded by ``master_seed``."""
    if index < 0:
        raise ValueError(f"index must be non-negative, got {index}")
    return splitmix64((master_seed & _MASK64) + (index + 1) * _GOLDEN_GAMMA)
