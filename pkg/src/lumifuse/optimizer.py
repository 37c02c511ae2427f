"""Search over illumination combinations and fusion methods.

Three procedures live here: exhaustive ranking of every (pattern subset,
method) pair, set intersection of the best pairs across metrics or
objects, and the greedy sequence builder that grows an illumination
sequence one pattern at a time. Plus the frame-rate arithmetic for
multi-capture acquisition.
"""

from __future__ import annotations

import csv
import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

import numpy as np

from .core import (METRICS, CaptureSet, FusionMethod, IlluminationPattern, MetricReport,
                   canonical_metric, format_patterns)
from .errors import ConfigError, FusionArityError, UnknownPatternError
from .fusion import fuse
from .metrics import evaluate

T = TypeVar("T")
R = TypeVar("R")

GRID_LEVELS = (0, 1, 5, 15)
GRID_0_1_5_15 = tuple(IlluminationPattern(r, g, b) for r in GRID_LEVELS for g in GRID_LEVELS for b in GRID_LEVELS)

# Stand-in for the 23 undisclosed collection settings: the eight settings
# named in the experiments first, then a fixed fill. Replace with real data
# via an explicit pattern list when available.
SETTINGS_23_PLACEHOLDER = tuple(IlluminationPattern(*t) for t in (
    (15, 15, 15), (15, 0, 0), (0, 15, 0), (0, 0, 15), (15, 15, 0), (0, 15, 15), (15, 10, 5), (0, 10, 3),
    (15, 0, 15), (10, 10, 10), (5, 5, 5), (10, 0, 0), (0, 10, 0), (0, 0, 10), (5, 0, 0), (0, 5, 0),
    (0, 0, 5), (15, 5, 0), (0, 5, 15), (5, 15, 0), (0, 15, 5), (15, 0, 5), (5, 0, 15),
))

PRESETS = {
    "grid-0-1-5-15": GRID_0_1_5_15,
    "settings-23-placeholder": SETTINGS_23_PLACEHOLDER,
}

METRIC_MODES = ("sharpness", "contrast", "background_diff", "intersection")


def grid_subset(n: int) -> list[IlluminationPattern]:
    """``n`` patterns spread evenly over the lexicographically ordered 64-setting grid."""
    idx = np.unique(np.rint(np.linspace(0, len(GRID_0_1_5_15) - 1, n)).astype(int))
    return [GRID_0_1_5_15[i] for i in idx]


def thread_count() -> int:
    env = os.environ.get("LUMIFUSE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"LUMIFUSE_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Order-preserving map; results never depend on the thread count."""
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class SearchConfig:
    patterns: Sequence[IlluminationPattern]
    methods: Sequence[FusionMethod]
    max_combo_size: int = 5
    metric_mode: str = "intersection"
    top_k: int = 10  # size of each metric's "best" set in intersection mode

    def __post_init__(self):
        pats = tuple(sorted(set(self.patterns)))
        object.__setattr__(self, "patterns", pats)
        object.__setattr__(self, "methods", tuple(self.methods))
        if not pats:
            raise ConfigError("patterns must be non-empty")
        if not self.methods:
            raise ConfigError("methods must be non-empty")
        if not 1 <= self.max_combo_size <= len(pats):
            raise ConfigError(f"max_combo_size must be in [1, {len(pats)}], got {self.max_combo_size}")
        if self.metric_mode not in METRIC_MODES:
            raise ConfigError(f"metric_mode must be one of {METRIC_MODES}, got {self.metric_mode!r}")
        if self.top_k < 1:
            raise ConfigError(f"top_k must be >= 1, got {self.top_k}")


@dataclass(frozen=True)
class SearchResult:
    patterns: tuple[IlluminationPattern, ...]
    method: FusionMethod
    report: MetricReport
    rank: int = 0

    @property
    def key(self) -> tuple[tuple[IlluminationPattern, ...], FusionMethod]:
        return self.patterns, self.method


@dataclass
class SequenceResult:
    metric: str
    sequence: list[IlluminationPattern]
    reports: list[MetricReport] = field(default_factory=list)

    @property
    def scores(self) -> list[float]:
        return [r[self.metric] for r in self.reports]

    @property
    def best_n(self) -> int:
        return self.best_n_for(self.metric)

    def best_n_for(self, metric: str) -> int:
        """Prefix length with the highest value of ``metric`` (shortest on ties)."""
        values = [r[metric] for r in self.reports]
        return int(np.argmax(values)) + 1


def evaluate_combination(cs: CaptureSet, patterns: Sequence[IlluminationPattern],
                         method: FusionMethod) -> MetricReport:
    """Metrics of the fused captures against the identically fused backgrounds.

    A single pattern is evaluated raw, without fusion.
    """
    patterns = list(patterns)
    unknown = [p for p in patterns if p not in cs.captures]
    if unknown:
        raise UnknownPatternError(f"{cs.object_id}: no capture for pattern(s) {format_patterns(unknown)}")
    if len(patterns) == 1:
        p = patterns[0]
        return evaluate(cs.captures[p], cs.backgrounds[p])
    if not method.accepts(len(patterns)):
        lo, hi = method.arity
        raise FusionArityError(method.name, f"exactly {lo}" if lo == hi else f"at least {lo}", len(patterns))
    fused = fuse(method, [cs.captures[p] for p in patterns])
    fused_bg = fuse(method, [cs.backgrounds[p] for p in patterns])
    return evaluate(fused, fused_bg)


def _candidates(cfg: SearchConfig) -> list[tuple[tuple[IlluminationPattern, ...], int]]:
    out = []
    for size in range(1, cfg.max_combo_size + 1):
        for combo in itertools.combinations(cfg.patterns, size):
            for mi, method in enumerate(cfg.methods):
                # fixed-arity methods only apply to subsets they can fuse
                if size == 1 or method.accepts(size):
                    out.append((combo, mi))
    return out


def _tiebreak(combo: tuple, mi: int) -> tuple:
    return len(combo), combo, mi


def metric_order(results: Sequence[SearchResult], metric: str, method_index: Mapping) -> list[SearchResult]:
    metric = canonical_metric(metric)
    return sorted(results, key=lambda r: (-r.report[metric],) + _tiebreak(r.patterns, method_index[r.method]))


def exhaustive_search(cs: CaptureSet, cfg: SearchConfig) -> list[SearchResult]:
    """Evaluate every subset of size 1..max_combo_size with every method, ranked.

    Single-metric modes sort by that metric, descending. Intersection mode
    sorts by the worst per-metric rank, so the first entries are exactly the
    pairs that sit in every metric's top-k set. Ties fall back to (subset
    size, pattern tuple, method position in ``cfg.methods``).
    """
    missing = [p for p in cfg.patterns if p not in cs.captures]
    if missing:
        raise UnknownPatternError(f"{cs.object_id}: no capture for pattern(s) {format_patterns(missing)}")
    cands = _candidates(cfg)
    reports = parallel_map(lambda c: evaluate_combination(cs, c[0], cfg.methods[c[1]]), cands)
    results = [SearchResult(combo, cfg.methods[mi], rep) for (combo, mi), rep in zip(cands, reports)]
    method_index = {m: i for i, m in reversed(list(enumerate(cfg.methods)))}

    if cfg.metric_mode == "intersection":
        ranks = {}
        for metric in METRICS:
            for pos, r in enumerate(metric_order(results, metric, method_index), start=1):
                ranks.setdefault(id(r), []).append(pos)
        ordered = sorted(results, key=lambda r: (max(ranks[id(r)]), sum(ranks[id(r)]))
                         + _tiebreak(r.patterns, method_index[r.method]))
    else:
        ordered = metric_order(results, cfg.metric_mode, method_index)
    return [SearchResult(r.patterns, r.method, r.report, rank) for rank, r in enumerate(ordered, start=1)]


def best_sets(results: Sequence[SearchResult], methods: Sequence[FusionMethod], top_k: int) -> dict[str, set]:
    """Each metric's top-k (patterns, method) pairs."""
    method_index = {m: i for i, m in reversed(list(enumerate(methods)))}
    return {metric: {r.key for r in metric_order(results, metric, method_index)[:top_k]} for metric in METRICS}


def intersect_best(per_metric: Mapping[str, set]) -> set:
    """Pairs common to every set; an empty result is valid."""
    if not per_metric:
        raise ValueError("intersect_best needs at least one set")
    sets = [set(s) for s in per_metric.values()]
    return set.intersection(*sets)


def greedy_sequence(cs: CaptureSet, patterns: Sequence[IlluminationPattern], method: FusionMethod,
                    metric: str, max_len: int, allow_repeats: bool = False) -> SequenceResult:
    """Grow an illumination sequence one pattern at a time.

    Step 1 takes the best raw capture; every later step appends the
    candidate whose fusion with the current prefix scores highest. Ties go
    to the lexicographically smallest pattern. Already chosen patterns are
    skipped unless ``allow_repeats`` is set.
    """
    metric = canonical_metric(metric)
    pool = sorted(set(patterns))
    if not pool:
        raise ConfigError("greedy_sequence needs at least one pattern")
    if max_len < 1 or (not allow_repeats and max_len > len(pool)):
        raise ConfigError(f"max_len must be in [1, {len(pool)}], got {max_len}")
    unknown = [p for p in pool if p not in cs.captures]
    if unknown:
        raise UnknownPatternError(f"{cs.object_id}: no capture for pattern(s) {format_patterns(unknown)}")

    result = SequenceResult(metric, [])
    for _ in range(max_len):
        cands = pool if allow_repeats else [p for p in pool if p not in result.sequence]
        reports = parallel_map(lambda p: evaluate_combination(cs, result.sequence + [p], method), cands)
        best = 0
        for i, rep in enumerate(reports):
            if rep[metric] > reports[best][metric]:
                best = i
        result.sequence.append(cands[best])
        result.reports.append(reports[best])
    return result


def effective_frame_rate(num_patterns: int, inter_frame_seconds: float) -> float:
    """Fused frames per second when each output needs ``num_patterns`` captures."""
    if num_patterns < 1:
        raise ValueError(f"num_patterns must be >= 1, got {num_patterns}")
    if not inter_frame_seconds > 0:
        raise ValueError(f"inter_frame_seconds must be > 0, got {inter_frame_seconds}")
    return 1.0 / (num_patterns * inter_frame_seconds)


SEARCH_COLUMNS = ("object_id", "patterns", "method", "sharpness", "rms_contrast", "background_diff", "rank")
SEQUENCE_COLUMNS = ("object_id", "metric", "step", "pattern", "sharpness", "rms_contrast", "background_diff",
                    "score", "best_n")


def _metric_cells(rep: MetricReport) -> list[str]:
    return [repr(rep.sharpness), repr(rep.rms_contrast), repr(rep.background_difference)]


def write_search_csv(rows: Iterable[tuple[str, SearchResult]], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(SEARCH_COLUMNS)
        for object_id, r in rows:
            w.writerow([object_id, format_patterns(r.patterns), str(r.method), *_metric_cells(r.report), r.rank])


def write_sequence_csv(rows: Iterable[tuple[str, SequenceResult]], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(SEQUENCE_COLUMNS)
        for object_id, seq in rows:
            for step, (p, rep) in enumerate(zip(seq.sequence, seq.reports), start=1):
                w.writerow([object_id, seq.metric, step, str(p), *_metric_cells(rep), repr(rep[seq.metric]),
                            seq.best_n])


def read_csv(path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
