"""Separable 2-D Haar DWT, its inverse, and wavelet-domain fusion.

Band naming follows the filtering order: the first letter is the filter
applied along rows (horizontal direction), the second the filter applied
along columns. LH therefore holds horizontal detail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Image
from .errors import TooManyLevelsError
from .pyramid import check_inputs, select_max_abs

SQRT_HALF = np.sqrt(0.5)
LOW_PASS = np.array([SQRT_HALF, SQRT_HALF])
HIGH_PASS = np.array([SQRT_HALF, -SQRT_HALF])
DEFAULT_LEVELS = 2


def _analyze(x: np.ndarray, axis: int) -> tuple[np.ndarray, np.ndarray]:
    """One Haar analysis step along ``axis``; odd lengths get a mirrored last sample."""
    x = np.moveaxis(x, axis, 0)
    if x.shape[0] % 2:
        x = np.concatenate([x, x[-1:]], axis=0)
    even, odd = x[0::2], x[1::2]
    low = (even + odd) * SQRT_HALF
    high = (even - odd) * SQRT_HALF
    return np.moveaxis(low, 0, axis), np.moveaxis(high, 0, axis)


def _synthesize(low: np.ndarray, high: np.ndarray, axis: int, length: int) -> np.ndarray:
    low = np.moveaxis(low, axis, 0)
    high = np.moveaxis(high, axis, 0)
    out = np.empty((2 * low.shape[0],) + low.shape[1:])
    out[0::2] = (low + high) * SQRT_HALF
    out[1::2] = (low - high) * SQRT_HALF
    return np.moveaxis(out[:length], 0, axis)


@dataclass(frozen=True)
class WaveletLevel:
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray
    shape: tuple[int, int]  # (h, w) of the band this level decomposed


@dataclass(frozen=True)
class WaveletDecomposition:
    """Detail bands from finest to coarsest plus the coarsest approximation."""

    levels: tuple[WaveletLevel, ...]
    final_ll: np.ndarray

    @property
    def original_dims(self) -> tuple[tuple[int, int], ...]:
        """(w, h) of the input to every level."""
        return tuple((lv.shape[1], lv.shape[0]) for lv in self.levels)

    def __len__(self):
        return len(self.levels)


def dwt2_level(band: np.ndarray) -> tuple[np.ndarray, WaveletLevel]:
    """Rows first (axis 1), then columns (axis 0)."""
    row_low, row_high = _analyze(band, axis=1)
    ll, lh = _analyze(row_low, axis=0)
    hl, hh = _analyze(row_high, axis=0)
    return ll, WaveletLevel(lh, hl, hh, band.shape[:2])


def idwt2_level(ll: np.ndarray, level: WaveletLevel) -> np.ndarray:
    h, w = level.shape
    row_low = _synthesize(ll, level.lh, axis=0, length=h)
    row_high = _synthesize(level.hl, level.hh, axis=0, length=h)
    return _synthesize(row_low, row_high, axis=1, length=w)


def dwt2(img, levels: int = DEFAULT_LEVELS) -> WaveletDecomposition:
    """Multi-level Haar decomposition of a single-channel image.

    Every level needs a band of at least 2x2; odd extents are padded by
    repeating the last row/column, and the original size is recorded so
    :func:`idwt2` can crop back exactly.
    """
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    if arr.ndim != 2:
        raise ValueError(f"dwt2 takes a single-channel image, got shape {arr.shape}")
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    out = []
    ll = arr
    for k in range(levels):
        if min(ll.shape) < 2:
            raise TooManyLevelsError(
                f"{levels} levels is too many for a {arr.shape[1]}x{arr.shape[0]} image "
                f"(band is {ll.shape[1]}x{ll.shape[0]} at level {k})")
        ll, lv = dwt2_level(ll)
        out.append(lv)
    return WaveletDecomposition(tuple(out), ll)


def idwt2(dec: WaveletDecomposition, clamp: bool = True) -> np.ndarray:
    ll = dec.final_ll
    for lv in reversed(dec.levels):
        ll = idwt2_level(ll, lv)
    return np.clip(ll, 0.0, 1.0) if clamp else ll


def fuse_decompositions(decs: Sequence[WaveletDecomposition]) -> WaveletDecomposition:
    """Max-absolute detail selection (ties to the earliest input), mean approximation."""
    levels = []
    for lvs in zip(*(d.levels for d in decs)):
        levels.append(WaveletLevel(
            select_max_abs(np.stack([lv.lh for lv in lvs])),
            select_max_abs(np.stack([lv.hl for lv in lvs])),
            select_max_abs(np.stack([lv.hh for lv in lvs])),
            lvs[0].shape,
        ))
    ll = np.mean(np.stack([d.final_ll for d in decs]), axis=0)
    return WaveletDecomposition(tuple(levels), ll)


def fuse_dwt(inputs: Sequence[Image], levels: int = DEFAULT_LEVELS) -> Image:
    """Wavelet-domain fusion, channel by channel for colour inputs."""
    arrays = check_inputs(inputs, "dwt")
    if arrays[0].ndim == 2:
        arrays = [a[:, :, None] for a in arrays]
    channels = []
    for c in range(arrays[0].shape[2]):
        decs = [dwt2(a[:, :, c], levels) for a in arrays]
        channels.append(idwt2(fuse_decompositions(decs)))
    return Image(np.stack(channels, axis=2))
