"""Counter-based hashing for reproducible, order-independent sampling.

Every random decision in the package (sketch membership, pivot sampling,
cluster-center coins) is a pure function of (seed, stream, counters, id).
Python's builtin hash() is salted per process, so we use a splitmix64
finalizer instead; the scalar and vectorized paths produce identical bits.
"""

from __future__ import annotations

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# stream tags keep the independent sampling decisions in disjoint domains
STREAM_AGREE = 0xA6   # agreement-sketch level membership
STREAM_LP = 0x17      # metric-estimator level membership
STREAM_PIVOT = 0x9C   # candidate-pair pivot sampling
STREAM_ROUND = 0x5D   # cluster-center coins in parallel rounding


def _mix64(z: int) -> int:
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def mix(seed: int, *parts: int) -> int:
    """Fold integers into a 64-bit state, left to right."""
    h = _mix64(seed & _MASK64)
    for p in parts:
        h = _mix64(h ^ (p & _MASK64))
    return h


def hash01(seed: int, *parts: int) -> float:
    """Uniform float in [0, 1) derived from the counters."""
    return (mix(seed, *parts) >> 11) * 2.0**-53


def hash01_array(seed: int, parts: tuple[int, ...], ids: np.ndarray) -> np.ndarray:
    """Vectorized hash01(seed, *parts, i) for every i in ids."""
    base = np.uint64(mix(seed, *parts))
    z = base ^ ids.astype(np.uint64)
    z = z + np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53
