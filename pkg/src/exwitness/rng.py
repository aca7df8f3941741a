"""Portable seeded pseudo-random generator shared by the whole package.

The generator is counter-based splitmix64: output k of stream `seed` is
the splitmix64 finalizer applied to ``seed + (k+1) * GOLDEN`` (mod 2^64).
Every output is a pure function of (seed, k), so scalar and vectorized
paths produce identical streams on every platform, and any slice of a
stream can be generated independently.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1

# 2^-53, scale for converting the top 53 bits to a double in [0, 1)
_INV_2_53 = 1.0 / (1 << 53)


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


def raw64(seed: int, index: int) -> int:
    """The index-th 64-bit output of the stream with the given seed."""
    return _mix((seed + (index + 1) * GOLDEN) & _MASK)


def uniform(seed: int, index: int) -> float:
    """The index-th double in [0, 1) of the stream with the given seed."""
    return (raw64(seed, index) >> 11) * _INV_2_53


def uniform_block(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs start .. start+count-1 of the stream, as float64 in [0, 1).

    Bit-identical to calling :func:`uniform` at each index.
    """
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & _MASK) + idx * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53
