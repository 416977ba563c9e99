import hashlib
import re

import pytest

from pareto_lens import ApproximationSet, InsufficientDataError, maximise_specs, pivot_scatter, render_scatter
from pareto_lens.scatter import choose_pivot, read_scatter_csv, spread_scores


def test_identity_projection():
    s = ApproximationSet.from_values([(0, 0), (1, 1)], maximise_specs(2))
    series = pivot_scatter(s, 1)
    assert series.series == ((0, ((0.0, 0.0), (1.0, 1.0))),)


def test_example19_pivot_z1(example19):
    series = pivot_scatter(example19, 0)
    assert [k for k, _ in series.series] == [1, 2]
    assert all(len(pts) == 19 for _, pts in series.series)
    assert all(0 <= c <= 1 for _, pts in series.series for p in pts for c in p)


def test_constant_pivot_sits_mid_axis():
    s = ApproximationSet.from_values([(3, 1), (3, 5), (3, 2)], maximise_specs(2))
    assert {x for x, _ in pivot_scatter(s, 0).series[0][1]} == {0.5}


def test_errors():
    with pytest.raises(InsufficientDataError):
        pivot_scatter(ApproximationSet(tuple(maximise_specs(2)), ()), 0)
    s = ApproximationSet.from_values([(3, 1)], maximise_specs(2))
    with pytest.raises(IndexError):
        pivot_scatter(s, 2)


def test_render_files(tmp_path):
    rows = [(1, 5, 3, 9), (2, 4, 8, 1), (7, 1, 2, 2)]
    s = ApproximationSet.from_values(rows, maximise_specs(4))
    series = pivot_scatter(s, 0)
    svg, csv = render_scatter(series, tmp_path / "new" / "plot.svg")
    text = svg.read_text()
    fills = set(re.findall(r'class="series"[^>]*fill="(#[0-9a-f]{6})"', text))
    assert len(fills) == 3
    for name in ("Z2", "Z3", "Z4"):
        assert f">{name}</text>" in text
    assert len(csv.read_text().splitlines()) == 1 + 3 * 3
    assert read_scatter_csv(csv, series.names, 0) == series
    digest = hashlib.sha256(svg.read_bytes()).hexdigest()
    render_scatter(series, tmp_path / "new" / "plot.svg")
    assert hashlib.sha256(svg.read_bytes()).hexdigest() == digest


def test_pivot_exchange_preserves_points(example19):
    a = pivot_scatter(example19, 0)
    b = pivot_scatter(example19, 2)
    # rebuild the normalised vectors from either projection
    def vectors(series, m=3):
        out = [[None] * m for _ in range(19)]
        for k, pts in series.series:
            for r, (x, y) in enumerate(pts):
                out[r][series.pivot] = x
                out[r][k] = y
        return sorted(map(tuple, out))
    assert vectors(a) == vectors(b)


def test_spread_and_choice():
    s = ApproximationSet.from_values([(0, 0), (0, 1), (10, 0.5), (10, 0.5)], maximise_specs(2))
    scores = spread_scores(s)
    assert scores[0] > scores[1]
    assert choose_pivot(s) == 0
