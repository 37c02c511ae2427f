"""Image quality metrics: gradient sharpness, RMS contrast, background difference.

Colour images are reduced to Rec.709 luminance before any metric is taken.
"""

from __future__ import annotations

import numpy as np

from .core import Image, MetricReport, luminance
from .errors import DimensionMismatchError, ImageTooSmallError


def _plane(img) -> np.ndarray:
    return luminance(img.pixels if isinstance(img, Image) else img)


def sharpness(img: Image) -> float:
    """Mean gradient magnitude.

    Central differences in the interior and one-sided differences on the
    border, unit spacing (exactly ``np.gradient`` with ``edge_order=1``).
    """
    plane = _plane(img)
    if min(plane.shape) < 2:
        raise ImageTooSmallError(f"sharpness needs at least 2x2, got {plane.shape[1]}x{plane.shape[0]}")
    gy, gx = np.gradient(plane)
    return float(np.mean(np.hypot(gx, gy)))


def rms_contrast(img: Image) -> float:
    # shifting by one sample first makes constant images come out exactly 0
    plane = _plane(img)
    d = plane - plane.flat[0]
    return float(np.sqrt(np.mean((d - d.mean()) ** 2)))


def background_difference(img: Image, bg: Image) -> float:
    if np.shape(img) != np.shape(bg):
        raise DimensionMismatchError(f"image {np.shape(img)} and background {np.shape(bg)} differ in shape")
    a, b = _plane(img), _plane(bg)
    return float(np.mean(np.abs(a - b)))


def evaluate(img: Image, bg: Image) -> MetricReport:
    return MetricReport(sharpness(img), rms_contrast(img), background_difference(img, bg))
