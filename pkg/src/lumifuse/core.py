"""Domain types shared by every lumifuse module.

Images are stored as read-only float64 arrays of shape (height, width,
channels) with samples in [0, 1]. Pyramid and wavelet internals work on
plain ndarrays whose values are unbounded; only the public constructors
here enforce the [0, 1] range.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import InvalidImageError, InvalidPatternError

LUMA_WEIGHTS = np.array([0.2126, 0.7152, 0.0722])


@dataclass(frozen=True, eq=False)
class Image:
    """Immutable raster with 1 or 3 channels and samples in [0, 1].

    Use :meth:`from_array` to build one from any array-like; ``pixels`` is
    always a read-only ``(height, width, channels)`` float64 array.
    """

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.array(self.pixels, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3 or arr.shape[2] not in (1, 3):
            raise InvalidImageError(f"expected (h, w), (h, w, 1) or (h, w, 3) array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidImageError(f"image must be at least 1x1, got {arr.shape[1]}x{arr.shape[0]}")
        if not np.all(np.isfinite(arr)):
            raise InvalidImageError("image contains non-finite samples")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise InvalidImageError(f"samples must lie in [0, 1], got range [{arr.min()}, {arr.max()}]")
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_array(cls, arr, clip: bool = False) -> Image:
        """Build an image, optionally clamping samples into [0, 1] first."""
        arr = np.asarray(arr, dtype=np.float64)
        if clip:
            arr = np.clip(arr, 0.0, 1.0)
        return cls(arr)

    @classmethod
    def constant(cls, width: int, height: int, value: float | Sequence[float] = 0.0, channels: int = 1) -> Image:
        return cls(np.broadcast_to(np.asarray(value, dtype=np.float64), (height, width, channels)))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.pixels.shape

    @property
    def plane(self) -> np.ndarray:
        """The single channel of a grayscale image as a 2-D array."""
        if self.channels != 1:
            raise InvalidImageError("plane is only defined for 1-channel images")
        return self.pixels[:, :, 0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.pixels
        return self.pixels.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    __hash__ = None

    def __repr__(self):
        return f"Image({self.width}x{self.height}x{self.channels})"


def to_grayscale(img: Image) -> Image:
    """Rec.709 luminance; 1-channel input is returned unchanged."""
    if img.channels == 1:
        return img
    luma = img.pixels @ LUMA_WEIGHTS
    # weights sum to 1 so only rounding can push a sample outside [0, 1]
    return Image(np.clip(luma, 0.0, 1.0))


def luminance(arr: np.ndarray) -> np.ndarray:
    """Luminance plane of an (h, w, c) array without range checks."""
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim == 2:
        return arr
    if arr.shape[2] == 1:
        return arr[:, :, 0]
    return arr @ LUMA_WEIGHTS


@dataclass(frozen=True, order=True)
class IlluminationPattern:
    """LED intensities (r, g, b), each an integer in [0, 15]."""

    r: int
    g: int
    b: int

    def __post_init__(self):
        for name in ("r", "g", "b"):
            v = getattr(self, name)
            if isinstance(v, (bool, np.bool_)) or not isinstance(v, (int, np.integer)):
                raise InvalidPatternError(f"{name} must be an integer, got {v!r}")
            if not 0 <= v <= 15:
                raise InvalidPatternError(f"{name}={v} outside [0, 15]")
            object.__setattr__(self, name, int(v))

    def __iter__(self) -> Iterator[int]:
        return iter((self.r, self.g, self.b))

    def __str__(self):
        return f"{self.r},{self.g},{self.b}"

    @property
    def stem(self) -> str:
        return f"r{self.r}_g{self.g}_b{self.b}"

    @classmethod
    def parse(cls, text: str) -> IlluminationPattern:
        parts = text.strip().strip("()").split(",")
        if len(parts) != 3:
            raise InvalidPatternError(f"pattern must be 'r,g,b', got {text!r}")
        try:
            return cls(*(int(p) for p in parts))
        except ValueError as exc:
            raise InvalidPatternError(f"pattern must be 'r,g,b', got {text!r}") from exc


STATIC_PATTERN = IlluminationPattern(15, 15, 15)


def parse_patterns(text: str) -> list[IlluminationPattern]:
    """Parse ``r,g,b;r,g,b;...``."""
    items = [t for t in text.split(";") if t.strip()]
    if not items:
        raise InvalidPatternError("empty pattern list")
    return [IlluminationPattern.parse(t) for t in items]


def format_patterns(patterns: Sequence[IlluminationPattern]) -> str:
    return ";".join(str(p) for p in patterns)


class FusionKind(enum.Enum):
    CHANNEL_SUM = "channel-sum"
    BROVEY = "brovey"
    LAPLACIAN = "laplacian"
    DWT = "dwt"


@dataclass(frozen=True)
class FusionMethod:
    """A fusion algorithm plus its parameters.

    ``levels`` is the pyramid depth for LAPLACIAN (None picks the default
    depth for the image size) and the decomposition depth for DWT.
    """

    kind: FusionKind
    levels: int | None = None

    def __post_init__(self):
        if self.kind is FusionKind.DWT and self.levels is None:
            object.__setattr__(self, "levels", 2)
        if self.kind in (FusionKind.CHANNEL_SUM, FusionKind.BROVEY) and self.levels is not None:
            raise ValueError(f"{self.kind.value} takes no levels parameter")
        if self.levels is not None and self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")

    @classmethod
    def channel_sum(cls) -> FusionMethod:
        return cls(FusionKind.CHANNEL_SUM)

    @classmethod
    def brovey(cls) -> FusionMethod:
        return cls(FusionKind.BROVEY)

    @classmethod
    def laplacian(cls, levels: int | None = None) -> FusionMethod:
        return cls(FusionKind.LAPLACIAN, levels)

    @classmethod
    def dwt(cls, levels: int = 2) -> FusionMethod:
        return cls(FusionKind.DWT, levels)

    @classmethod
    def parse(cls, text: str) -> FusionMethod:
        """Accepts ``channel-sum``, ``brovey``, ``laplacian[:n]`` and ``dwt[:n]``."""
        name, _, lv = text.strip().lower().partition(":")
        aliases = {"channelsum": "channel-sum", "channel_sum": "channel-sum", "wavelet": "dwt",
                   "pyramid": "laplacian", "laplacian-pyramid": "laplacian"}
        name = aliases.get(name, name)
        try:
            kind = FusionKind(name)
        except ValueError:
            valid = ", ".join(k.value for k in FusionKind)
            raise ValueError(f"unknown fusion method {text!r} (expected one of: {valid})") from None
        return cls(kind, int(lv) if lv else None)

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def arity(self) -> tuple[int, int | None]:
        """(min, max) number of inputs; max None means unbounded."""
        if self.kind in (FusionKind.CHANNEL_SUM, FusionKind.BROVEY):
            return 3, 3
        return 2, None

    def accepts(self, n: int) -> bool:
        lo, hi = self.arity
        return n >= lo and (hi is None or n <= hi)

    def __str__(self):
        return self.name if self.levels is None else f"{self.name}:{self.levels}"


@dataclass(frozen=True)
class MetricReport:
    sharpness: float
    rms_contrast: float
    background_difference: float

    def __post_init__(self):
        for name in ("sharpness", "rms_contrast", "background_difference"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")
            object.__setattr__(self, name, v)

    def __getitem__(self, metric: str) -> float:
        return getattr(self, METRIC_ALIASES.get(metric, metric))

    def as_dict(self) -> dict[str, float]:
        return {"sharpness": self.sharpness, "rms_contrast": self.rms_contrast,
                "background_difference": self.background_difference}


METRIC_ALIASES = {
    "contrast": "rms_contrast",
    "background_diff": "background_difference",
    "background": "background_difference",
}
METRICS = ("sharpness", "rms_contrast", "background_difference")


def canonical_metric(name: str) -> str:
    name = METRIC_ALIASES.get(name, name)
    if name not in METRICS:
        raise ValueError(f"unknown metric {name!r}")
    return name


@dataclass
class CaptureSet:
    """One object's captures and per-pattern backgrounds.

    ``scene`` and ``timestamps`` are optional provenance recorded in the
    manifest; they take no part in equality.
    """

    object_id: str
    captures: dict[IlluminationPattern, Image] = field(default_factory=dict)
    backgrounds: dict[IlluminationPattern, Image] = field(default_factory=dict)
    scene: Mapping | None = field(default=None, compare=False)
    timestamps: dict[IlluminationPattern, str] | None = field(default=None, compare=False)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        from .errors import DatasetDimensionError, MissingBackgroundError

        missing = [p for p in self.captures if p not in self.backgrounds]
        if missing:
            raise MissingBackgroundError(
                f"{self.object_id}: no background for pattern(s) {format_patterns(sorted(missing))}")
        shapes = {img.shape for img in (*self.captures.values(), *self.backgrounds.values())}
        if len(shapes) > 1:
            raise DatasetDimensionError(f"{self.object_id}: images differ in shape: {sorted(shapes)}")

    @property
    def patterns(self) -> list[IlluminationPattern]:
        return sorted(self.captures)

    def __eq__(self, other):
        if not isinstance(other, CaptureSet):
            return NotImplemented
        return (self.object_id == other.object_id and self.captures == other.captures
                and self.backgrounds == other.backgrounds)
