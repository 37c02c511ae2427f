"""Pixel-domain fusion (channel-wise summation, Brovey) and dispatch over all methods."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import FusionKind, FusionMethod, Image, luminance
from .errors import DimensionMismatchError, FusionArityError
from .pyramid import fuse_laplacian
from .wavelet import fuse_dwt

BROVEY_EPS = 1e-8


def _check_triplet(images: Sequence[Image], method: str, rgb: bool) -> None:
    if len(images) != 3:
        raise FusionArityError(method, "exactly 3", len(images))
    shapes = {img.shape for img in images}
    if len(shapes) != 1:
        raise DimensionMismatchError(f"{method}: inputs differ in shape: {sorted(shapes)}")
    if rgb and images[0].channels != 3:
        raise DimensionMismatchError(f"{method}: inputs must be 3-channel, got {images[0].channels}")


def fuse_channel_sum(i_r: Image, i_g: Image, i_b: Image) -> Image:
    """Red channel from the red-lit image, green from the green-lit, blue from the blue-lit."""
    _check_triplet((i_r, i_g, i_b), "channel-sum", rgb=True)
    return Image(np.stack([i_r.pixels[:, :, 0], i_g.pixels[:, :, 1], i_b.pixels[:, :, 2]], axis=2))


def fuse_brovey(i_r: Image, i_g: Image, i_b: Image) -> Image:
    """Luminance-share weighted sum of three images.

    Each pixel of input k is weighted by L_k / (L_R + L_G + L_B + eps) where
    L is that input's luminance at the pixel.
    """
    images = (i_r, i_g, i_b)
    _check_triplet(images, "brovey", rgb=False)
    lum = np.stack([luminance(img.pixels) for img in images])
    weights = lum / (lum.sum(axis=0) + BROVEY_EPS)
    fused = sum(w[:, :, None] * img.pixels for w, img in zip(weights, images))
    return Image(np.clip(fused, 0.0, 1.0))


def fuse(method: FusionMethod, inputs: Sequence[Image]) -> Image:
    """Apply ``method`` to ``inputs``; raises FusionArityError on a wrong input count."""
    inputs = list(inputs)
    if not method.accepts(len(inputs)):
        lo, hi = method.arity
        expected = f"exactly {lo}" if lo == hi else f"at least {lo}"
        raise FusionArityError(method.name, expected, len(inputs))
    if method.kind is FusionKind.CHANNEL_SUM:
        return fuse_channel_sum(*inputs)
    if method.kind is FusionKind.BROVEY:
        return fuse_brovey(*inputs)
    if method.kind is FusionKind.LAPLACIAN:
        return fuse_laplacian(inputs, method.levels)
    return fuse_dwt(inputs, method.levels)
