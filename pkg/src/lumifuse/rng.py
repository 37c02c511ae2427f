"""Portable counter-based random numbers.

Streams are SplitMix64 (Steele, Lea & Flood 2014): output i of the stream
keyed by ``k`` is ``mix(k + (i + 1) * GOLDEN)`` with 64-bit wraparound.
Uniforms take the top 53 bits; normals use the cosine branch of
Box-Muller on consecutive uniform pairs. Nothing here depends on numpy's
own generators, so the sequences can be reproduced in any language.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on a uint64 array."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def derive_key(*values: int) -> int:
    """Fold integers into one 64-bit stream key.

    key_0 = 0; key_{j+1} = mix(key_j + GOLDEN + (v_j mod 2^64)).
    """
    key = 0
    for v in values:
        z = (key + int(GOLDEN) + (int(v) & _MASK)) & _MASK
        key = int(mix64(np.uint64(z)))
    return key


def uint64_stream(key: int, n: int) -> np.ndarray:
    counters = np.arange(1, n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(np.uint64(key & _MASK) + counters * GOLDEN)


def uniform(key: int, n: int) -> np.ndarray:
    """n doubles in [0, 1)."""
    return (uint64_stream(key, n) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


def normal(key: int, shape) -> np.ndarray:
    n = int(np.prod(shape))
    u = uniform(key, 2 * n)
    u1 = 1.0 - u[0::2]  # (0, 1], keeps log finite
    u2 = u[1::2]
    return (np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)).reshape(shape)
