"""
    geonorm.streams

Seeded random streams. A stream owns a numpy Generator and counts the
uniform variates it has handed out; child streams for replications are
derived from the parent seed and the replication index only, so they can
be assigned before work is dispatched to any worker.
"""

import numpy as np

from .constants import RNG_ALGORITHM

_MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """One round of the SplitMix64 finaliser."""
    z = (value + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def child_seed(seed: int, index: int) -> int:
    return (seed ^ splitmix64(index)) & _MASK64


class RngStream:
    """
    Single-owner source of uniform variates.

    Identical ``(seed, algorithm)`` pairs produce identical sequences.
    Streams are meant to be moved between threads or processes, not
    shared.
    """
    def __init__(self, seed: int, algorithm: str = RNG_ALGORITHM):
        if algorithm != RNG_ALGORITHM:
            raise ValueError(f"unsupported algorithm {algorithm!r}")
        self.seed = int(seed) & _MASK64
        self.algorithm = algorithm
        self.draws = 0
        self._generator = np.random.Generator(np.random.PCG64(self.seed))

    def __repr__(self):
        return (
            f"RngStream(seed={self.seed}, algorithm={self.algorithm!r}, "
            f"draws={self.draws})"
        )

    def uniform(self, size: int) -> np.ndarray:
        """`size` variates uniform on [0, 1)."""
        values = self._generator.random(size)
        self.draws += int(size)
        return values

    def child(self, index: int) -> 'RngStream':
        return RngStream(child_seed(self.seed, index), self.algorithm)
