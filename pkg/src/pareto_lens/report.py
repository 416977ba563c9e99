"""Four-step report bundle: correlations, ranges, region maps, sweeps and scatter plots."""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from html import escape
from pathlib import Path
from typing import Sequence

from . import __version__
from .core import ApproximationSet, InsufficientDataError
from .correlation import pairwise_matrix
from .io import atomic_write_text, write_json
from .ranges import DEFAULT_CUTOFF, classify_meaningful, objective_ranges
from .regionmap import (
    DEFAULT_ALPHA,
    DEFAULT_RESOLUTION,
    STRICT_POLICY,
    RegionMap,
    ThresholdVector,
    UnsupportedArityError,
    build_distribution_map,
    build_frequency_map,
    gray_layout,
    level_thresholds,
    maximal_all_good_threshold,
    mean_thresholds,
    minimal_empty_r0_threshold,
    threshold_sweep,
)
from .scatter import choose_pivot, pivot_scatter, render_scatter, spread_scores
from .svg import regionmap_svg, with_meta

THREADS_ENV = "PARETO_LENS_THREADS"
RANGE_POLICY_NOTE = "fraction-of-scale cutoff stands in for domain judgement"


def base_meta(**extra) -> dict:
    meta = {"tool": "pareto-lens", "version": __version__, "threshold_semantics": STRICT_POLICY}
    meta.update(extra)
    return meta


def max_workers() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# -- threshold policies -----------------------------------------------------


@dataclass
class ThresholdChoice:
    thresholds: ThresholdVector
    policy: str
    level: float | None = None
    note: str = ""

    def as_dict(self) -> dict:
        out = {"policy": self.policy, "thresholds": list(self.thresholds.t), "level": self.level}
        if self.note:
            out["note"] = self.note
        return out


def parse_policy(text: str) -> tuple[str, float | None]:
    if text in ("min-empty-r0", "mean"):
        return text, None
    if text.startswith("fixed:"):
        try:
            v = float(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad fixed level in {text!r}") from None
        if not 0.0 <= v <= 1.0:
            raise ValueError("fixed level must lie in [0, 1]")
        return "fixed", v
    raise ValueError(f"unknown threshold policy {text!r}")


def choose_thresholds(
    aset: ApproximationSet,
    policy: str = "min-empty-r0",
    raw: Sequence[float] | None = None,
    resolution: int = DEFAULT_RESOLUTION,
) -> ThresholdChoice:
    if raw is not None:
        values = list(raw) * aset.m if len(raw) == 1 else list(raw)
        if len(values) != aset.m:
            raise ValueError(f"expected 1 or {aset.m} threshold values")
        return ThresholdChoice(ThresholdVector(tuple(values)), "explicit")
    kind, level = parse_policy(policy)
    if kind == "mean":
        return ThresholdChoice(mean_thresholds(aset), "mean")
    if kind == "fixed":
        return ThresholdChoice(level_thresholds(aset, level), policy, level)
    level = minimal_empty_r0_threshold(aset, resolution)
    if level is None:
        return ThresholdChoice(
            mean_thresholds(aset),
            "mean",
            None,
            "region r0 never empties (ideal point present); fell back to mean thresholds",
        )
    return ThresholdChoice(level_thresholds(aset, level), "min-empty-r0", level)


# -- per-step payloads ------------------------------------------------------


def corr_payload(aset: ApproximationSet, variant: str = "a") -> dict:
    rels = pairwise_matrix(aset, variant)
    return {
        "meta": base_meta(instance=aset.instance_id, tau_variant=variant, solutions=len(aset)),
        "objectives": [s.name for s in aset.specs],
        "pairs": [r.as_dict() for r in rels],
    }


def corr_csv(aset: ApproximationSet, payload: dict) -> str:
    names = payload["objectives"]
    m = len(names)
    mat = [[1.0 if i == j else None for j in range(m)] for i in range(m)]
    for pair in payload["pairs"]:
        mat[pair["i"]][pair["j"]] = mat[pair["j"]][pair["i"]] = pair["tau"]
    buf = io.StringIO()
    buf.write(f"# tool: pareto-lens {__version__}; tau variant {payload['meta']['tau_variant']}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + names)
    for name, row in zip(names, mat):
        w.writerow([name] + [repr(v) for v in row])
    return buf.getvalue()


def ranges_payload(aset: ApproximationSet, cutoff: float = DEFAULT_CUTOFF, reference=None) -> dict:
    stats = objective_ranges(aset, reference)
    rows = []
    for st in stats:
        verdict = classify_meaningful(st, cutoff)
        row = st.as_dict()
        row["name"] = aset.specs[st.objective].name
        row["meaningful"] = verdict.meaningful
        rows.append(row)
    return {
        "meta": base_meta(
            instance=aset.instance_id,
            cutoff=cutoff,
            reference="supplied" if reference is not None else "set-max",
            meaningfulness_policy=RANGE_POLICY_NOTE,
        ),
        "objectives": rows,
    }


def ranges_csv(payload: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# tool: pareto-lens {__version__}; values as percent of reference scale\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["objective", "min_pct", "mean_pct", "max_pct", "range_fraction", "meaningful"])
    for row in payload["objectives"]:
        scale = row["max"] if row["max"] else 1.0
        w.writerow([
            row["name"],
            repr(100 * row["min"] / scale),
            repr(100 * row["mean"] / scale),
            repr(100 * row["max"] / scale),
            repr(row["range_fraction"]),
            row["meaningful"],
        ])
    return buf.getvalue()


def regionmap_payload(aset: ApproximationSet, choice: ThresholdChoice) -> tuple[dict, RegionMap]:
    rmap = build_distribution_map(aset, choice.thresholds)
    payload = rmap.as_dict()
    payload["meta"] = base_meta(instance=aset.instance_id, threshold=choice.as_dict())
    payload["all_good_boundary"] = list(maximal_all_good_threshold(aset).t)
    return payload, rmap


def region_table(values: Sequence[float], m: int) -> list[dict]:
    """Sorted fallback listing used when no printable grid exists for m."""
    return [
        {"region": k, "good": m - bin(k).count("1"), "value": values[k]}
        for k in sorted(range(len(values)), key=lambda k: (bin(k).count("1"), k))
    ]


def render_region(values: Sequence[float], m: int, title: str, fmt: str = "{:.1%}") -> str | None:
    try:
        layout = gray_layout(m)
    except UnsupportedArityError:
        return None
    return regionmap_svg(layout, values, fmt, title)


def sweep_csv(curve, meta: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# tool: pareto-lens {__version__}; region r{curve.region}; {curve.normalisation}; "
              f"{curve.instance_total} instance(s); {meta.get('inputs', '')}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", f"instances_with_r{curve.region}"])
    for level, count in curve.as_rows():
        w.writerow([repr(level), count])
    return buf.getvalue()


# -- full bundle ------------------------------------------------------------


@dataclass
class ReportOptions:
    tau_variant: str = "a"
    cutoff: float = DEFAULT_CUTOFF
    policy: str = "min-empty-r0"
    thresholds: Sequence[float] | None = None
    resolution: int = DEFAULT_RESOLUTION
    alpha: int = DEFAULT_ALPHA
    pivot: int | None = None  # 0-based
    extra_meta: dict = field(default_factory=dict)


@dataclass
class InstanceReport:
    name: str
    directory: Path
    region_map: RegionMap
    files: list[str]
    notes: list[str]


def _report_one(aset: ApproximationSet, name: str, root: Path, opts: ReportOptions) -> InstanceReport:
    if len(aset) < 2:
        raise InsufficientDataError(f"{name}: the report needs at least two solutions")
    out = root / name
    files: list[str] = []
    notes: list[str] = []

    corr = corr_payload(aset, opts.tau_variant)
    write_json(out / "corr.json", corr)
    atomic_write_text(out / "corr.csv", corr_csv(aset, corr))
    files += ["corr.json", "corr.csv"]

    rng = ranges_payload(aset, opts.cutoff)
    write_json(out / "ranges.json", rng)
    atomic_write_text(out / "ranges.csv", ranges_csv(rng))
    files += ["ranges.json", "ranges.csv"]

    choice = choose_thresholds(aset, opts.policy, opts.thresholds, opts.resolution)
    if choice.note:
        notes.append(choice.note)
    rpayload, rmap = regionmap_payload(aset, choice)
    svg = render_region(rmap.percentages, aset.m, f"{name}: distribution of solutions")
    if svg is None:
        rpayload["table"] = region_table(rmap.percentages, aset.m)
        notes.append(f"no printable layout for m={aset.m}; region table written instead")
    write_json(out / "regionmap.json", rpayload)
    files.append("regionmap.json")
    if svg is not None:
        atomic_write_text(out / "regionmap.svg", with_meta(svg, rpayload["meta"]))
        files.append("regionmap.svg")

    curve = threshold_sweep([aset], opts.alpha, 0)
    atomic_write_text(out / "sweep.csv", sweep_csv(curve, {"inputs": name}))
    files.append("sweep.csv")

    scores = spread_scores(aset)
    if opts.pivot is None:
        pivot = choose_pivot(aset)
        notes.append(f"pivot {aset.specs[pivot].name} chosen automatically by spread score")
    else:
        pivot = opts.pivot
        if scores[pivot] == min(scores) and len(set(scores)) > 1:
            notes.append(f"pivot {aset.specs[pivot].name} has the lowest spread of all objectives")
    series = pivot_scatter(aset, pivot)
    render_scatter(
        series,
        out / "scatter.svg",
        title=f"{name}: pivot {aset.specs[pivot].name}",
        meta=base_meta(instance=name, pivot=aset.specs[pivot].name, spread_scores=scores),
    )
    files += ["scatter.svg", "scatter.csv"]
    write_json(out / "meta.json", base_meta(
        instance=name,
        solutions=len(aset),
        threshold=choice.as_dict(),
        pivot=aset.specs[pivot].name,
        spread_scores=scores,
        tau_variant=opts.tau_variant,
        notes=notes,
        **opts.extra_meta,
    ))
    files.append("meta.json")
    return InstanceReport(name, out, rmap, files, notes)


def _unique_names(sets: Sequence[ApproximationSet]) -> list[str]:
    names, seen = [], {}
    for k, s in enumerate(sets):
        base = s.instance_id or f"set{k + 1}"
        count = seen.get(base, 0)
        seen[base] = count + 1
        names.append(base if count == 0 else f"{base}_{count + 1}")
    return names


def build_report(sets: Sequence[ApproximationSet], out_dir, opts: ReportOptions | None = None) -> Path:
    opts = opts or ReportOptions()
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    names = _unique_names(sets)
    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        reports = list(pool.map(lambda a: _report_one(a[0], a[1], root, opts), zip(sets, names)))

    ms = {s.m for s in sets}
    family: list[str] = []
    if len(ms) == 1:
        m = ms.pop()
        freq = build_frequency_map([r.region_map for r in reports])
        payload = freq.as_dict()
        payload["meta"] = base_meta(inputs=names, threshold_policy=opts.policy)
        svg = render_region(freq.fractions, m, f"frequency of instances ({len(sets)})", "{:.0%}")
        if svg is None:
            payload["table"] = region_table(freq.fractions, m)
        write_json(root / "frequency.json", payload)
        family.append("frequency.json")
        if svg is not None:
            atomic_write_text(root / "frequency.svg", with_meta(svg, payload["meta"]))
            family.append("frequency.svg")
        curve = threshold_sweep(list(sets), opts.alpha, 0)
        atomic_write_text(root / "sweep.csv", sweep_csv(curve, {"inputs": ",".join(names)}))
        family.append("sweep.csv")
    atomic_write_text(root / "index.html", _index_html(reports, family))
    return root / "index.html"


def _index_html(reports: list[InstanceReport], family: list[str]) -> str:
    parts = [
        "<!DOCTYPE html>",
        "<html><head><meta charset=\"utf-8\"><title>objective relationship report</title></head><body>",
        f"<h1>Objective relationship report</h1><p>pareto-lens {__version__}</p>",
    ]
    if family:
        parts.append("<h2>All inputs</h2><ul>")
        parts += [f'<li><a href="{escape(f)}">{escape(f)}</a></li>' for f in family]
        parts.append("</ul>")
        if "frequency.svg" in family:
            parts.append('<img src="frequency.svg" alt="frequency of instances map">')
    for rep in reports:
        parts.append(f"<h2>{escape(rep.name)}</h2><ul>")
        parts += [f'<li><a href="{escape(rep.name)}/{escape(f)}">{escape(f)}</a></li>' for f in rep.files]
        parts.append("</ul>")
        for note in rep.notes:
            parts.append(f"<p><em>{escape(note)}</em></p>")
        for img in ("regionmap.svg", "scatter.svg"):
            if img in rep.files:
                parts.append(f'<img src="{escape(rep.name)}/{img}" alt="{img}">')
    parts.append("</body></html>")
    return "\n".join(parts) + "\n"
