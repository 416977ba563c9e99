"""Gray-coded trade-off region maps and threshold analysis.

A solution's region number has bit ``i`` clear when objective ``i`` is good
(strictly better than its threshold) and set when it is bad, so region 0 holds
solutions that are good everywhere and region ``2**m - 1`` those that are bad
everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import ApproximationSet, DimensionError, InsufficientDataError, ObjectiveSpec

DEFAULT_ALPHA = 50
DEFAULT_RESOLUTION = 100
STRICT_POLICY = "good iff strictly better than threshold; equality is bad"


class UnsupportedArityError(ValueError):
    pass


@dataclass(frozen=True)
class ThresholdVector:
    t: tuple[float, ...]
    semantics: str = STRICT_POLICY

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(float(x) for x in self.t))
        if not all(np.isfinite(self.t)):
            raise ValueError("thresholds must be finite")

    def __len__(self):
        return len(self.t)


@dataclass(frozen=True)
class RegionMap:
    m: int
    thresholds: ThresholdVector
    counts: tuple[int, ...]
    total: int

    @property
    def percentages(self) -> tuple[float, ...]:
        if self.total == 0:
            return tuple(0.0 for _ in self.counts)
        return tuple(c / self.total for c in self.counts)

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "thresholds": list(self.thresholds.t),
            "threshold_semantics": self.thresholds.semantics,
            "counts": list(self.counts),
            "total": self.total,
            "percentages": list(self.percentages),
        }


@dataclass(frozen=True)
class FrequencyMap:
    m: int
    counts: tuple[int, ...]
    instance_total: int

    @property
    def fractions(self) -> tuple[float, ...]:
        return tuple(c / self.instance_total for c in self.counts)

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "counts": list(self.counts),
            "instance_total": self.instance_total,
            "fractions": list(self.fractions),
        }


def good_count(region: int, m: int) -> int:
    return m - bin(region).count("1")


# -- region numbering -------------------------------------------------------


def _signed(values: np.ndarray, specs_or_signs) -> np.ndarray:
    if isinstance(specs_or_signs, np.ndarray):
        signs = specs_or_signs
    else:
        signs = np.array([s.sign for s in specs_or_signs], dtype=float)
    return np.asarray(values, dtype=float) * signs


def region_indices(values: np.ndarray, thresholds: Sequence[float], signs: np.ndarray) -> np.ndarray:
    """Vectorised region numbers for the rows of ``values``."""
    values = np.atleast_2d(np.asarray(values, dtype=float))
    t = np.asarray(thresholds, dtype=float)
    if values.shape[1] != len(t) or len(t) != len(signs):
        raise DimensionError("values, thresholds and signs disagree in length")
    bad = ~(values * signs > t * signs)
    weights = 1 << np.arange(len(t), dtype=np.int64)
    return bad.astype(np.int64) @ weights


def region_index(v: Sequence[float], thresholds, specs: Sequence[ObjectiveSpec]) -> int:
    t = thresholds.t if isinstance(thresholds, ThresholdVector) else tuple(thresholds)
    if len(v) != len(specs) or len(t) != len(specs):
        raise DimensionError("vector, thresholds and specs disagree in length")
    signs = np.array([s.sign for s in specs], dtype=float)
    return int(region_indices(np.array([v], dtype=float), t, signs)[0])


def build_distribution_map(aset: ApproximationSet, thresholds) -> RegionMap:
    if len(aset) == 0:
        raise InsufficientDataError("region map needs a non-empty set")
    if not isinstance(thresholds, ThresholdVector):
        thresholds = ThresholdVector(tuple(thresholds))
    if len(thresholds) != aset.m:
        raise DimensionError(f"expected {aset.m} thresholds, got {len(thresholds)}")
    idx = region_indices(aset.values(), thresholds.t, aset.signs())
    counts = np.bincount(idx, minlength=2 ** aset.m)
    return RegionMap(aset.m, thresholds, tuple(int(c) for c in counts), len(aset))


def build_frequency_map(maps: Sequence[RegionMap]) -> FrequencyMap:
    if not maps:
        raise InsufficientDataError("frequency map needs at least one region map")
    ms = {mp.m for mp in maps}
    if len(ms) != 1:
        raise DimensionError(f"region maps disagree on objective count: {sorted(ms)}")
    occupied = np.array([[c > 0 for c in mp.counts] for mp in maps])
    return FrequencyMap(maps[0].m, tuple(int(c) for c in occupied.sum(axis=0)), len(maps))


# -- printable layout -------------------------------------------------------

# Gray order of two bits: 00, 01, 11, 10
_GRAY2 = (0, 1, 3, 2)


@dataclass(frozen=True)
class GrayLayout:
    """Karnaugh-style arrangement of region numbers.

    ``blocks`` holds one grid for m in {3, 4} and two side-by-side grids for
    m = 5 (left: Z5 good, right: Z5 bad). Columns walk Z1/Z2 and rows Z3/Z4 in
    Gray order, wrapping around at the edges.
    """

    m: int
    blocks: tuple[tuple[tuple[int, ...], ...], ...]
    column_labels: tuple[str, ...] = field(default=())
    row_labels: tuple[str, ...] = field(default=())
    block_labels: tuple[str, ...] = field(default=())

    def cells(self):
        for b, grid in enumerate(self.blocks):
            for r, row in enumerate(grid):
                for c, region in enumerate(row):
                    yield b, r, c, region

    def position(self, region: int) -> tuple[int, int, int]:
        for b, r, c, reg in self.cells():
            if reg == region:
                return b, r, c
        raise KeyError(region)

    def neighbours(self, region: int) -> set[int]:
        """Edge-adjacent cells with wrap-around, plus the twin cell across blocks."""
        b, r, c = self.position(region)
        grid = self.blocks[b]
        rows, cols = len(grid), len(grid[0])
        out = {
            grid[(r - 1) % rows][c],
            grid[(r + 1) % rows][c],
            grid[r][(c - 1) % cols],
            grid[r][(c + 1) % cols],
        }
        for ob, other in enumerate(self.blocks):
            if ob != b:
                out.add(other[r][c])
        out.discard(region)
        return out


def _label(bits: int, names: Sequence[str]) -> str:
    return " ".join(f"{n}{'-' if bits >> k & 1 else '+'}" for k, n in enumerate(names))


def gray_layout(m: int) -> GrayLayout:
    if m not in (3, 4, 5):
        raise UnsupportedArityError(f"printable region maps exist for 3, 4 or 5 objectives, not {m}")
    col_codes = _GRAY2
    row_codes = (0, 1) if m == 3 else _GRAY2
    row_codes = tuple(code << 2 for code in row_codes)
    block_codes = (0, 16) if m == 5 else (0,)
    blocks = tuple(
        tuple(tuple(base + rc + cc for cc in col_codes) for rc in row_codes)
        for base in block_codes
    )
    col_labels = tuple(_label(cc, ("Z1", "Z2")) for cc in col_codes)
    row_names = ("Z3",) if m == 3 else ("Z3", "Z4")
    row_labels = tuple(_label(rc >> 2, row_names) for rc in row_codes)
    block_labels = ("Z5+", "Z5-") if m == 5 else ("",)
    return GrayLayout(m, blocks, col_labels, row_labels, block_labels)


# -- threshold analysis -----------------------------------------------------


@dataclass(frozen=True)
class SweepCurve:
    levels: tuple[float, ...]
    counts: tuple[int, ...]
    region: int
    instance_total: int
    normalisation: str = "per-instance min-max"

    def first_zero_level(self) -> float | None:
        for level, count in zip(self.levels, self.counts):
            if count == 0:
                return level
        return None

    def as_rows(self) -> list[tuple[float, int]]:
        return list(zip(self.levels, self.counts))


def level_thresholds(aset: ApproximationSet, level: float) -> ThresholdVector:
    """Raw thresholds placing every objective ``level`` of the way from worst to best.

    Objectives with zero range get a threshold that leaves them good below
    level 0.5 and bad from 0.5 on, matching the mid-axis normalisation rule.
    """
    if len(aset) == 0:
        raise InsufficientDataError("thresholds need a non-empty set")
    signs = aset.signs()
    f = aset.values() * signs
    lo, hi = f.min(axis=0), f.max(axis=0)
    span = hi - lo
    t = np.where(span > 0, lo + level * span, lo + (level - 0.5))
    return ThresholdVector(tuple(t * signs))


def mean_thresholds(aset: ApproximationSet) -> ThresholdVector:
    if len(aset) == 0:
        raise InsufficientDataError("thresholds need a non-empty set")
    return ThresholdVector(tuple(aset.values().mean(axis=0)))


def _has_region(aset: ApproximationSet, level: float, region: int) -> bool:
    t = level_thresholds(aset, level)
    idx = region_indices(aset.values(), t.t, aset.signs())
    return bool(np.any(idx == region))


def threshold_sweep(
    sets: Sequence[ApproximationSet], alpha: int = DEFAULT_ALPHA, region: int = 0
) -> SweepCurve:
    """Number of sets with at least one solution in ``region`` at each of the
    ``alpha - 1`` interior levels that split every objective's range into
    ``alpha`` equal parts."""
    if alpha < 2:
        raise ValueError("alpha must be at least 2")
    if not sets or any(len(s) == 0 for s in sets):
        raise InsufficientDataError("sweep needs non-empty sets")
    levels = tuple(k / alpha for k in range(1, alpha))
    counts = tuple(sum(_has_region(s, lv, region) for s in sets) for lv in levels)
    return SweepCurve(levels, counts, region, len(sets))


def minimal_empty_r0_threshold(aset: ApproximationSet, resolution: int = DEFAULT_RESOLUTION) -> float | None:
    """Smallest level ``k / resolution`` (k < resolution) at which region 0 is empty.

    Returns None when some solution stays good in every objective on the whole
    grid, i.e. the set contains an ideal point.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    for k in range(resolution):
        level = k / resolution
        if not _has_region(aset, level, 0):
            return level
    return None


def maximal_all_good_threshold(aset: ApproximationSet) -> ThresholdVector:
    if len(aset) == 0:
        raise InsufficientDataError("thresholds need a non-empty set")
    f = aset.values() * aset.signs()
    worst = f.min(axis=0) * aset.signs()
    return ThresholdVector(
        tuple(worst),
        "supremum (open): every solution is good in every objective for any threshold strictly worse than this",
    )
