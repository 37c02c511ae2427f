"""Gaussian / Laplacian pyramids and pyramid-domain fusion.

Arrays are (h, w) or (h, w, c); filtering only touches the two spatial
axes so colour images are handled channel-wise for free. Values inside a
pyramid are unbounded; clamping to [0, 1] happens once, at reconstruction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.ndimage import correlate1d

from .core import Image
from .errors import DimensionMismatchError, FusionArityError, ImageTooSmallError, TooManyLevelsError

# Burt-Adelson binomial kernel
KERNEL = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0
DEFAULT_LEVELS = 4
MIN_COARSE_DIM = 4


def _smooth(arr: np.ndarray, kernel: np.ndarray, mode: str = "nearest") -> np.ndarray:
    out = correlate1d(arr, kernel, axis=0, mode=mode)
    return correlate1d(out, kernel, axis=1, mode=mode)


def gaussian_reduce(img) -> np.ndarray:
    """Blur with the 5-tap binomial kernel, then keep even rows and columns.

    Borders are edge-replicated. Output is ceil(h/2) x ceil(w/2).
    """
    arr = np.asarray(img, dtype=np.float64)
    if min(arr.shape[:2]) < 2:
        raise ImageTooSmallError(f"cannot reduce a {arr.shape[1]}x{arr.shape[0]} image")
    return _smooth(arr, KERNEL)[::2, ::2]


def expand(img, target_w: int, target_h: int) -> np.ndarray:
    """Upsample to (target_h, target_w) by zero insertion and 2x-gain smoothing.

    The coarse image is edge-padded by one sample first so the zero-inserted
    signal keeps its 2-periodic structure across the border, which is what
    makes constants map to the same constant.
    """
    arr = np.asarray(img, dtype=np.float64)
    h, w = arr.shape[:2]
    if (target_h + 1) // 2 != h or (target_w + 1) // 2 != w:
        raise DimensionMismatchError(
            f"cannot expand {w}x{h} to {target_w}x{target_h}: target must halve (ceil) to the source")
    pad = [(1, 1), (1, 1)] + [(0, 0)] * (arr.ndim - 2)
    padded = np.pad(arr, pad, mode="edge")
    up = np.zeros((2 * (h + 2),) + (2 * (w + 2),) + arr.shape[2:])
    up[::2, ::2] = padded
    up = _smooth(up, 2.0 * KERNEL, mode="constant")
    # padded coarse index -1 lands on fine index -2
    return up[2:2 + target_h, 2:2 + target_w]


@dataclass(frozen=True)
class LaplacianPyramid:
    """Detail levels L_0..L_{n-1} followed by the Gaussian residual G_n."""

    levels: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.levels) < 1:
            raise ValueError("a pyramid needs at least one level")
        for fine, coarse in zip(self.levels, self.levels[1:]):
            if coarse.shape[:2] != ((fine.shape[0] + 1) // 2, (fine.shape[1] + 1) // 2):
                raise DimensionMismatchError(f"level shapes {fine.shape} -> {coarse.shape} break the ceil-half rule")

    @property
    def details(self) -> tuple[np.ndarray, ...]:
        return self.levels[:-1]

    @property
    def residual(self) -> np.ndarray:
        return self.levels[-1]

    def __len__(self):
        return len(self.levels)


def max_levels(height: int, width: int) -> int:
    """Largest n for which every reduced level G_0..G_{n-1} has min dim >= 2."""
    n = 0
    while min(height, width) >= 2:
        height, width = (height + 1) // 2, (width + 1) // 2
        n += 1
    return n


def default_levels(height: int, width: int) -> int:
    """DEFAULT_LEVELS, reduced until the residual keeps min dim >= MIN_COARSE_DIM."""
    n = DEFAULT_LEVELS
    while n > 1 and min(-(-height // 2 ** n), -(-width // 2 ** n)) < MIN_COARSE_DIM:
        n -= 1
    return min(n, max(max_levels(height, width), 1))


def gaussian_pyramid(img, levels: int) -> list[np.ndarray]:
    arr = np.asarray(img, dtype=np.float64)
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    if levels > max_levels(*arr.shape[:2]):
        raise TooManyLevelsError(
            f"{levels} levels is too many for a {arr.shape[1]}x{arr.shape[0]} image "
            f"(max {max_levels(*arr.shape[:2])})")
    out = [arr]
    for _ in range(levels):
        out.append(gaussian_reduce(out[-1]))
    return out


def build_laplacian(img, levels: int) -> LaplacianPyramid:
    gauss = gaussian_pyramid(img, levels)
    details = []
    for fine, coarse in zip(gauss, gauss[1:]):
        details.append(fine - expand(coarse, fine.shape[1], fine.shape[0]))
    return LaplacianPyramid(tuple(details) + (gauss[-1],))


def reconstruct(pyr: LaplacianPyramid, clamp: bool = True) -> np.ndarray:
    """Collapse a pyramid coarse to fine; clamps to [0, 1] unless told not to."""
    out = pyr.residual
    for detail in reversed(pyr.details):
        out = detail + expand(out, detail.shape[1], detail.shape[0])
    return np.clip(out, 0.0, 1.0) if clamp else out


def select_max_abs(stack: np.ndarray) -> np.ndarray:
    """Pick, per element, the sample with the largest magnitude along axis 0.

    ``argmax`` returns the first maximal index, so ties go to the earliest input.
    """
    idx = np.argmax(np.abs(stack), axis=0)
    return np.take_along_axis(stack, idx[None], axis=0)[0]


def check_inputs(inputs: Sequence, method: str) -> list[np.ndarray]:
    if len(inputs) < 2:
        raise FusionArityError(method, "at least 2", len(inputs))
    arrays = [np.asarray(x, dtype=np.float64) for x in inputs]
    shapes = {a.shape for a in arrays}
    if len(shapes) != 1:
        raise DimensionMismatchError(f"{method}: inputs differ in shape: {sorted(shapes)}")
    return arrays


def fuse_laplacian(inputs: Sequence[Image], levels: int | None = None) -> Image:
    """Fuse images in the Laplacian domain.

    Detail coefficients: max-absolute selection. Residual: mean. With
    ``levels=None`` the depth comes from :func:`default_levels`.
    """
    arrays = check_inputs(inputs, "laplacian")
    if levels is None:
        levels = default_levels(*arrays[0].shape[:2])
    pyramids = [build_laplacian(a, levels) for a in arrays]
    composite = [select_max_abs(np.stack(lv)) for lv in zip(*(p.details for p in pyramids))]
    composite.append(np.mean(np.stack([p.residual for p in pyramids]), axis=0))
    return Image(reconstruct(LaplacianPyramid(tuple(composite))))
