"""8-bit PNG interchange for :class:`~lumifuse.core.Image`."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from .core import Image
from .errors import (MalformedPngError, PngIOError, UnsupportedBitDepthError,
                     UnsupportedChannelsError)

_HIGH_DEPTH_MODES = {"1", "I", "I;16", "I;16B", "I;16L", "I;16N", "F"}


def load_png(path) -> Image:
    """Read an 8-bit grayscale or RGB PNG, mapping byte v to v/255."""
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            try:
                pil = PILImage.open(fh)
                pil.load()
            except (UnidentifiedImageError, SyntaxError, ValueError) as exc:
                raise MalformedPngError(f"{path}: not a readable PNG ({exc})") from exc
    except OSError as exc:
        if isinstance(exc, MalformedPngError):
            raise
        # truncated streams surface from PIL as OSError as well
        if path.is_file():
            raise MalformedPngError(f"{path}: {exc}") from exc
        raise PngIOError(f"{path}: {exc}") from exc
    if pil.format != "PNG":
        raise MalformedPngError(f"{path}: expected PNG, got {pil.format}")
    if pil.mode in _HIGH_DEPTH_MODES:
        raise UnsupportedBitDepthError(f"{path}: mode {pil.mode} is not 8-bit")
    if pil.mode not in ("L", "RGB"):
        raise UnsupportedChannelsError(f"{path}: mode {pil.mode} is not 1- or 3-channel")
    return Image(np.asarray(pil, dtype=np.float64) / 255.0)


def to_bytes(img: Image) -> np.ndarray:
    return np.clip(np.rint(img.pixels * 255.0), 0, 255).astype(np.uint8)


def save_png(img: Image, path) -> None:
    """Write ``round(v*255)`` clamped to [0, 255] as an 8-bit PNG."""
    path = Path(path)
    data = to_bytes(img)
    pil = PILImage.fromarray(data[:, :, 0] if img.channels == 1 else data)
    try:
        pil.save(path, format="PNG")
    except OSError as exc:
        raise PngIOError(f"{path}: {exc}") from exc


def quantize(img: Image) -> Image:
    """The image as it would read back after a PNG round trip."""
    return Image(to_bytes(img) / 255.0)
