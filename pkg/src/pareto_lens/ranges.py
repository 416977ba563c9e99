"""Per-objective range statistics and the meaningful / non-meaningful verdict."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ApproximationSet, InsufficientDataError

DEFAULT_CUTOFF = 0.05


@dataclass(frozen=True)
class RangeStats:
    objective: int
    min: float
    max: float
    mean: float
    range: float
    range_fraction: float

    def as_dict(self) -> dict:
        return {
            "objective": self.objective,
            "min": self.min,
            "max": self.max,
            "mean": self.mean,
            "range": self.range,
            "range_fraction": self.range_fraction,
        }


@dataclass(frozen=True)
class MeaningfulnessVerdict:
    objective: int
    meaningful: bool
    policy: str


def objective_ranges(
    aset: ApproximationSet, reference: Sequence[float] | None = None
) -> list[RangeStats]:
    """Range of every objective across the set.

    ``range_fraction`` is the range divided by a reference scale: the largest
    absolute value observed for that objective by default, or ``reference[i]``
    when external ideal values are supplied.
    """
    if len(aset) == 0:
        raise InsufficientDataError("range analysis needs a non-empty set")
    vals = aset.values()
    lo, hi, mean = vals.min(axis=0), vals.max(axis=0), vals.mean(axis=0)
    if reference is None:
        scale = np.abs(vals).max(axis=0)
    else:
        scale = np.asarray(reference, dtype=float)
        if scale.shape != (aset.m,):
            raise ValueError(f"reference needs {aset.m} values")
    out = []
    for k in range(aset.m):
        span = float(hi[k] - lo[k])
        frac = span / scale[k] if scale[k] > 0 else 0.0
        # mean is recomputed in float, clamp the rounding
        mu = min(max(float(mean[k]), float(lo[k])), float(hi[k]))
        out.append(RangeStats(k, float(lo[k]), float(hi[k]), mu, span, float(frac)))
    return out


def classify_meaningful(stats: RangeStats, threshold_fraction: float = DEFAULT_CUTOFF) -> MeaningfulnessVerdict:
    if not 0.0 < threshold_fraction < 1.0:
        raise ValueError("threshold_fraction must lie in (0, 1)")
    return MeaningfulnessVerdict(
        stats.objective,
        stats.range_fraction >= threshold_fraction,
        f"range_fraction>={threshold_fraction:g} (fraction-of-scale stand-in for domain judgement)",
    )
