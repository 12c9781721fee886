"""Counter-based random angles.

Every angle is a pure function of ``(seed, repeat, stream, sample, param)``,
so any subset of samples can be regenerated in any order, by any worker,
with identical values.
"""
from __future__ import annotations

import numpy as np

from .circuit import TWO_PI

THETA, PHI = 0, 1

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1
_TOP_ANGLE = np.nextafter(TWO_PI, 0.0)


def _mix(x: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer; uint64 arithmetic wraps
    z = x + _GAMMA
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _key(*parts: int) -> np.ndarray:
    h = np.zeros(1, dtype=np.uint64)
    for p in parts:
        h = _mix(h ^ np.uint64(p & _MASK64))
    return h


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def uniform_angles(seed: int, repeat: int, stream: int, start: int, stop: int, width: int) -> np.ndarray:
    """Angles in [0, 2*pi) for samples ``start..stop-1``, shape ``(stop - start, width)``."""
    key = _key(check_seed(seed), repeat, stream)
    samples = np.arange(start, stop, dtype=np.uint64)[:, None]
    params = np.arange(width, dtype=np.uint64)[None, :]
    with np.errstate(over="ignore"):
        h = _mix(_mix(key ^ samples) ^ params)
    u = (h >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
    return np.minimum(u * TWO_PI, _TOP_ANGLE)
