"""Pivot scatter plots over a normalised approximation set."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import ApproximationSet, InsufficientDataError, normalize_values
from .io import atomic_write_text
from .svg import scatter_svg, with_meta


@dataclass(frozen=True)
class ScatterSeries:
    pivot: int
    names: tuple[str, ...]
    # (objective index, ((x, y), ...)) for every non-pivot objective
    series: tuple[tuple[int, tuple[tuple[float, float], ...]], ...]

    @property
    def m(self) -> int:
        return len(self.names)


def pivot_scatter(aset: ApproximationSet, pivot: int) -> ScatterSeries:
    if not 0 <= pivot < aset.m:
        raise IndexError(f"pivot {pivot} out of range for m={aset.m}")
    if len(aset) == 0:
        raise InsufficientDataError("scatter needs a non-empty set")
    norm = normalize_values(aset.values(), aset.signs())
    x = norm[:, pivot]
    series = tuple(
        (k, tuple(zip(x.tolist(), norm[:, k].tolist())))
        for k in range(aset.m)
        if k != pivot
    )
    return ScatterSeries(pivot, tuple(s.name for s in aset.specs), series)


def spread_scores(aset: ApproximationSet) -> list[float]:
    """Standard deviation of each objective after normalisation; larger is better spread."""
    norm = normalize_values(aset.values(), aset.signs())
    return [float(v) for v in norm.std(axis=0)]


def choose_pivot(aset: ApproximationSet) -> int:
    scores = spread_scores(aset)
    return int(np.argmax(scores))


def scatter_csv(series: ScatterSeries) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["series_objective", "x", "y"])
    for k, pts in series.series:
        for x, y in pts:
            writer.writerow([series.names[k], repr(x), repr(y)])
    return buf.getvalue()


def read_scatter_csv(path, names, pivot: int) -> ScatterSeries:
    names = tuple(names)
    index = {n: k for k, n in enumerate(names)}
    points: dict[int, list[tuple[float, float]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            k = index[row["series_objective"]]
            points.setdefault(k, []).append((float(row["x"]), float(row["y"])))
    return ScatterSeries(pivot, names, tuple((k, tuple(pts)) for k, pts in points.items()))


def render_scatter(series: ScatterSeries, out, title: str = "", meta: dict | None = None) -> tuple[Path, Path]:
    """Write ``out`` as SVG and a CSV twin next to it; returns both paths."""
    out = Path(out)
    labelled = [(series.names[k], k, pts) for k, pts in series.series]
    svg = scatter_svg(series.names[series.pivot], labelled, title=title)
    if meta:
        svg = with_meta(svg, meta)
    csv_path = out.with_suffix(".csv")
    atomic_write_text(out, svg)
    atomic_write_text(csv_path, scatter_csv(series))
    return out, csv_path
