"""Synthetic tactile-sensor renderer.

A scene is a height map of an object pressed into the gel. The gel is lit
by three directional LEDs (red, green, blue) at 120 degree azimuth spacing
and 30 degree elevation, shaded Lambertian, plus a small ambient term and
seeded Gaussian sensor noise. Everything is deterministic given the scene
seed; noise comes from :mod:`lumifuse.rng`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Iterable, Sequence

import numpy as np
from scipy.ndimage import gaussian_filter

from . import rng
from .core import CaptureSet, IlluminationPattern, Image
from .errors import SceneError

SHAPES = ("sphere", "edge", "ridge_grid", "text_stamp", "random_bumps", "flat")
AMBIENT = 0.05
LIGHT_GAIN = 1.0
LIGHT_ELEVATION_DEG = 30.0
LIGHT_AZIMUTHS_DEG = (90.0, 210.0, 330.0)
LIGHT_COLORS = np.eye(3)  # row k: RGB colour of LED k (red, green, blue)
BACKGROUND_FRAMES = 100
NOISE_SIGMA = 1.0 / 255.0  # one 8-bit code value

# 5x7 bitmap glyphs, one string per row
_GLYPHS = {
    "0": ("01110", "10001", "10011", "10101", "11001", "10001", "01110"),
    "1": ("00100", "01100", "00100", "00100", "00100", "00100", "01110"),
    "2": ("01110", "10001", "00001", "00010", "00100", "01000", "11111"),
    "3": ("11110", "00001", "00001", "01110", "00001", "00001", "11110"),
    "4": ("00010", "00110", "01010", "10010", "11111", "00010", "00010"),
    "5": ("11111", "10000", "11110", "00001", "00001", "10001", "01110"),
    "6": ("00110", "01000", "10000", "11110", "10001", "10001", "01110"),
    "7": ("11111", "00001", "00010", "00100", "01000", "01000", "01000"),
    "8": ("01110", "10001", "10001", "01110", "10001", "10001", "01110"),
    "9": ("01110", "10001", "10001", "01111", "00001", "00010", "01100"),
    "D": ("11100", "10010", "10001", "10001", "10001", "10010", "11100"),
    "G": ("01110", "10001", "10000", "10111", "10001", "10001", "01111"),
    "I": ("01110", "00100", "00100", "00100", "00100", "00100", "01110"),
    "T": ("11111", "00100", "00100", "00100", "00100", "00100", "00100"),
    " ": ("00000",) * 7,
}


@dataclass(frozen=True)
class SceneSpec:
    """Parameters of one synthetic contact.

    Lengths are in pixels; ``depth`` is the indentation depth in height
    units (pixels), ``angle`` in degrees. Only the parameters relevant to
    ``shape`` are used.
    """

    shape: str
    width: int = 80
    height: int = 60
    depth: float = 3.0
    radius: float = 14.0
    period: float = 10.0
    angle: float = 0.0
    count: int = 6
    text: str = "42"
    center: tuple[float, float] | None = None
    smoothing: float = 1.0
    noise_sigma: float = NOISE_SIGMA
    seed: int = 0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise SceneError(f"unknown shape {self.shape!r} (expected one of {', '.join(SHAPES)})")
        if self.width < 16 or self.height < 16:
            raise SceneError(f"scene must be at least 16x16, got {self.width}x{self.height}")
        if not self.depth > 0:
            raise SceneError(f"depth must be > 0, got {self.depth}")
        if self.noise_sigma < 0:
            raise SceneError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.radius <= 0 or self.period <= 0 or self.count < 1 or self.smoothing < 0:
            raise SceneError("radius and period must be > 0, count >= 1, smoothing >= 0")
        bad = set(self.text.upper()) - set(_GLYPHS)
        if bad:
            raise SceneError(f"text_stamp has no glyph for {''.join(sorted(bad))!r}")
        if self.center is not None:
            object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["center"] is not None:
            d["center"] = list(d["center"])
        return d

    @classmethod
    def from_dict(cls, data: dict) -> SceneSpec:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise SceneError(f"unknown scene field(s): {', '.join(sorted(unknown))}")
        if "shape" not in data:
            raise SceneError("scene needs a 'shape'")
        data = dict(data)
        if data.get("center") is not None:
            data["center"] = tuple(data["center"])
        return cls(**data)


def _coords(scene: SceneSpec) -> tuple[np.ndarray, np.ndarray]:
    cx, cy = scene.center if scene.center is not None else ((scene.width - 1) / 2, (scene.height - 1) / 2)
    y, x = np.mgrid[0:scene.height, 0:scene.width].astype(np.float64)
    return x - cx, y - cy


def _rotate(x: np.ndarray, y: np.ndarray, angle_deg: float) -> tuple[np.ndarray, np.ndarray]:
    a = np.deg2rad(angle_deg)
    return x * np.cos(a) + y * np.sin(a), -x * np.sin(a) + y * np.cos(a)


def _text_mask(scene: SceneSpec) -> np.ndarray:
    text = scene.text.upper()
    bitmap = np.hstack([np.array([[c == "1" for c in row] + [False] for row in _GLYPHS[ch]]) for ch in text])
    scale = max(1, int(min(0.6 * scene.height / 7, 0.8 * scene.width / bitmap.shape[1])))
    bitmap = np.kron(bitmap, np.ones((scale, scale), dtype=bool))
    mask = np.zeros((scene.height, scene.width))
    bh, bw = min(bitmap.shape[0], scene.height), min(bitmap.shape[1], scene.width)
    x0, y0 = (scene.width - bw) // 2, (scene.height - bh) // 2
    mask[y0:y0 + bh, x0:x0 + bw] = bitmap[:bh, :bw]
    return mask


def height_map(scene: SceneSpec) -> np.ndarray:
    """Indentation profile in [-depth, 0] (negative is pressed into the gel)."""
    x, y = _coords(scene)
    if scene.shape == "flat":
        return np.zeros((scene.height, scene.width))
    if scene.shape == "sphere":
        r2 = (x ** 2 + y ** 2) / scene.radius ** 2
        profile = np.sqrt(np.clip(1.0 - r2, 0.0, None))
    elif scene.shape == "edge":
        u, _ = _rotate(x, y, scene.angle)
        profile = 0.5 * (1.0 + np.tanh(u / 2.0))
    elif scene.shape == "ridge_grid":
        u, _ = _rotate(x, y, scene.angle)
        profile = 0.5 * (1.0 + np.cos(2.0 * np.pi * u / scene.period))
    elif scene.shape == "text_stamp":
        profile = _text_mask(scene)
    else:  # random_bumps
        u = rng.uniform(rng.derive_key(scene.seed, 0xB0B), 3 * scene.count).reshape(scene.count, 3)
        profile = np.zeros_like(x)
        for ux, uy, us in u:
            bx = (ux - 0.5) * 0.8 * scene.width
            by = (uy - 0.5) * 0.8 * scene.height
            s = scene.radius * (0.25 + 0.5 * us)
            profile = np.maximum(profile, np.exp(-((x - bx) ** 2 + (y - by) ** 2) / (2 * s ** 2)))
    if scene.smoothing > 0:
        profile = gaussian_filter(profile, scene.smoothing, mode="nearest")
    return -scene.depth * profile


def surface_normals(height: np.ndarray) -> np.ndarray:
    hy, hx = np.gradient(height)
    n = np.stack([-hx, -hy, np.ones_like(height)], axis=-1)
    return n / np.linalg.norm(n, axis=-1, keepdims=True)


def light_directions() -> np.ndarray:
    e = np.deg2rad(LIGHT_ELEVATION_DEG)
    a = np.deg2rad(np.array(LIGHT_AZIMUTHS_DEG))
    return np.stack([np.cos(e) * np.cos(a), np.cos(e) * np.sin(a), np.full(3, np.sin(e))], axis=1)


def shade(height: np.ndarray, pattern: IlluminationPattern) -> np.ndarray:
    """Noise-free Lambertian rendering, clamped to [0, 1]."""
    normals = surface_normals(height)
    out = np.full(height.shape + (3,), AMBIENT)
    for k, (direction, level) in enumerate(zip(light_directions(), pattern)):
        if level == 0:
            continue
        lambert = np.clip(normals @ direction, 0.0, None)
        out += LIGHT_GAIN * (level / 15.0) * lambert[:, :, None] * LIGHT_COLORS[k]
    return np.clip(out, 0.0, 1.0)


def _noise_key(scene: SceneSpec, pattern: IlluminationPattern, stream: int) -> int:
    return rng.derive_key(scene.seed, pattern.r, pattern.g, pattern.b, stream)


def _add_noise(base: np.ndarray, scene: SceneSpec, pattern: IlluminationPattern, stream: int) -> np.ndarray:
    if scene.noise_sigma == 0:
        return base
    noisy = base + scene.noise_sigma * rng.normal(_noise_key(scene, pattern, stream), base.shape)
    return np.clip(noisy, 0.0, 1.0)


def render(scene: SceneSpec, pattern: IlluminationPattern) -> Image:
    """Render the scene in contact under ``pattern`` (noise stream 0)."""
    return Image(_add_noise(shade(height_map(scene), pattern), scene, pattern, 0))


def render_background(scene: SceneSpec, pattern: IlluminationPattern, frames: int = BACKGROUND_FRAMES) -> Image:
    """Mean of ``frames`` noisy renders of the gel without contact (streams 1..frames)."""
    base = shade(np.zeros((scene.height, scene.width)), pattern)
    if scene.noise_sigma == 0:
        return Image(base)
    total = np.zeros_like(base)
    for k in range(1, frames + 1):
        total += _add_noise(base, scene, pattern, k)
    return Image(np.clip(total / frames, 0.0, 1.0))


def simulate_capture_set(scene: SceneSpec, patterns: Iterable[IlluminationPattern],
                         object_id: str | None = None) -> CaptureSet:
    patterns = sorted(set(patterns))
    return CaptureSet(
        object_id=object_id or f"{scene.shape}-{scene.seed}",
        captures={p: render(scene, p) for p in patterns},
        backgrounds={p: render_background(scene, p) for p in patterns},
        scene=scene.to_dict(),
    )


def make_corpus(n: int, seed: int = 0, width: int = 80, height: int = 60,
                noise_sigma: float = NOISE_SIGMA, shapes: Sequence[str] = SHAPES[:5]) -> list[SceneSpec]:
    """``n`` seeded scenes cycling through ``shapes`` with randomized parameters."""
    scenes = []
    for i in range(n):
        u = rng.uniform(rng.derive_key(seed, i, 0xC0), 6)
        scenes.append(SceneSpec(
            shape=shapes[i % len(shapes)],
            width=width,
            height=height,
            depth=float(1.5 + 4.5 * u[0]),
            radius=float(0.15 * min(width, height) + 0.2 * min(width, height) * u[1]),
            period=float(6 + 10 * u[2]),
            angle=float(180 * u[3]),
            count=int(3 + 6 * u[4]),
            text=str(int(10 + 90 * u[5])),
            center=(float((width - 1) / 2 + (u[5] - 0.5) * 0.2 * width),
                    float((height - 1) / 2 + (u[4] - 0.5) * 0.2 * height)),
            noise_sigma=noise_sigma,
            seed=derive_seed(seed, i),
        ))
    return scenes


def derive_seed(seed: int, index: int) -> int:
    return rng.derive_key(seed, index) & 0x7FFFFFFF
