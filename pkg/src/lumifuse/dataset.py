"""On-disk capture sets.

Layout, one directory per object::

    <root>/<object_id>/captures/r{r}_g{g}_b{b}.png
    <root>/<object_id>/background/r{r}_g{g}_b{b}.png
    <root>/<object_id>/manifest.json
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import CaptureSet, IlluminationPattern, Image
from .errors import (DatasetDimensionError, DatasetError, InvalidPatternError, MalformedFilenameError,
                     PngIOError)
from .pngio import load_png, quantize, save_png

CAPTURES_DIR = "captures"
BACKGROUND_DIR = "background"
MANIFEST = "manifest.json"
FORMAT_TAG = "lumifuse-capture-set"
_NAME_RE = re.compile(r"^r(\d+)_g(\d+)_b(\d+)\.png$")


def average_backgrounds(frames: Sequence[Image]) -> Image:
    """Per-pixel mean of no-contact frames."""
    frames = list(frames)
    if not frames:
        raise ValueError("average_backgrounds needs at least one frame")
    shapes = {f.shape for f in frames}
    if len(shapes) != 1:
        raise DatasetDimensionError(f"background frames differ in shape: {sorted(shapes)}")
    return Image(np.clip(np.mean(np.stack([f.pixels for f in frames]), axis=0), 0.0, 1.0))


def pattern_from_filename(name: str) -> IlluminationPattern:
    m = _NAME_RE.match(name)
    if not m:
        raise MalformedFilenameError(f"{name!r} does not match r<r>_g<g>_b<b>.png")
    try:
        return IlluminationPattern(*(int(v) for v in m.groups()))
    except InvalidPatternError as exc:
        raise MalformedFilenameError(f"{name!r}: {exc}") from exc


def _load_dir(path: Path) -> dict[IlluminationPattern, Image]:
    if not path.is_dir():
        return {}
    return {pattern_from_filename(f.name): load_png(f) for f in sorted(path.iterdir()) if f.is_file()}


def load_capture_set(path) -> CaptureSet:
    """Load one object directory (the one holding ``captures/`` and ``background/``)."""
    path = Path(path)
    if not path.is_dir():
        raise PngIOError(f"{path}: not a directory")
    manifest = {}
    if (path / MANIFEST).is_file():
        try:
            manifest = json.loads((path / MANIFEST).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DatasetError(f"{path / MANIFEST}: invalid JSON ({exc})") from exc
    timestamps = manifest.get("timestamps")
    if timestamps is not None:
        timestamps = {IlluminationPattern.parse(k): v for k, v in timestamps.items()}
    return CaptureSet(
        object_id=manifest.get("object_id", path.name),
        captures=_load_dir(path / CAPTURES_DIR),
        backgrounds=_load_dir(path / BACKGROUND_DIR),
        scene=manifest.get("scene"),
        timestamps=timestamps,
    )


def load_dataset(root) -> list[CaptureSet]:
    """Every object directory under ``root``, sorted by directory name."""
    root = Path(root)
    if not root.is_dir():
        raise PngIOError(f"{root}: not a directory")
    dirs = [d for d in sorted(root.iterdir()) if d.is_dir() and ((d / MANIFEST).exists() or (d / CAPTURES_DIR).is_dir())]
    return [load_capture_set(d) for d in dirs]


def find_object(root, object_id: str) -> CaptureSet:
    root = Path(root)
    direct = root / object_id
    if direct.is_dir():
        return load_capture_set(direct)
    for cs in load_dataset(root):
        if cs.object_id == object_id:
            return cs
    raise DatasetError(f"object {object_id!r} not found under {root}")


def _write_dir(images: dict[IlluminationPattern, Image], path: Path) -> None:
    path.mkdir(parents=True, exist_ok=True)
    for stale in path.glob("r*_g*_b*.png"):
        stale.unlink()
    for p, img in sorted(images.items()):
        save_png(img, path / f"{p.stem}.png")


def export_capture_set(cs: CaptureSet, root) -> Path:
    """Write ``cs`` under ``root/<object_id>`` and return that directory."""
    cs.validate()
    target = Path(root) / cs.object_id
    try:
        target.mkdir(parents=True, exist_ok=True)
        _write_dir(cs.captures, target / CAPTURES_DIR)
        _write_dir(cs.backgrounds, target / BACKGROUND_DIR)
        manifest = {
            "format": FORMAT_TAG,
            "version": 1,
            "object_id": cs.object_id,
            "scene": cs.scene,
            "patterns": [str(p) for p in cs.patterns],
            "background_patterns": [str(p) for p in sorted(cs.backgrounds)],
            "timestamps": None if cs.timestamps is None else {str(p): t for p, t in sorted(cs.timestamps.items())},
        }
        (target / MANIFEST).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        if isinstance(exc, PngIOError):
            raise
        raise PngIOError(f"{target}: {exc}") from exc
    return target


def quantize_capture_set(cs: CaptureSet) -> CaptureSet:
    """The capture set exactly as it reads back after export."""
    return CaptureSet(cs.object_id,
                      {p: quantize(img) for p, img in cs.captures.items()},
                      {p: quantize(img) for p, img in cs.backgrounds.items()},
                      scene=cs.scene, timestamps=cs.timestamps)
