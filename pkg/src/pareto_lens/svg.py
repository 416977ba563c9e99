"""Hand-written, deterministic SVG output for scatter plots and region maps."""

from __future__ import annotations

import json
from html import escape
from typing import Sequence

# fixed palette indexed by objective number
PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)

# grey tone by number of bad objectives
SHADES = ("#FFFFFF", "#EFEFEF", "#C0C0C0", "#9B9B9B", "#656565", "#343434")


def colour(k: int) -> str:
    return PALETTE[k % len(PALETTE)]


def shade(bad: int) -> str:
    return SHADES[min(bad, len(SHADES) - 1)]


def _num(v: float) -> str:
    return f"{v:.2f}"


def scatter_svg(
    pivot_name: str,
    series: Sequence[tuple[str, int, Sequence[tuple[float, float]]]],
    title: str = "",
    size: int = 480,
) -> str:
    """``series`` entries are (label, objective index, points in [0,1]^2)."""
    margin = 50
    plot = size - 2 * margin
    legend_w = 110
    width = size + legend_w
    px = lambda x: margin + x * plot  # noqa: E731
    py = lambda y: margin + (1 - y) * plot  # noqa: E731
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{size}" '
        f'viewBox="0 0 {width} {size}">',
        f'<rect x="0" y="0" width="{width}" height="{size}" fill="#ffffff"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append(
        f'<rect x="{margin}" y="{margin}" width="{plot}" height="{plot}" fill="none" stroke="#000000"/>'
    )
    for k in range(11):
        v = k / 10
        out.append(f'<line x1="{_num(px(v))}" y1="{_num(py(0))}" x2="{_num(px(v))}" y2="{_num(py(0) + 4)}" stroke="#000000"/>')
        out.append(f'<line x1="{_num(px(0) - 4)}" y1="{_num(py(v))}" x2="{_num(px(0))}" y2="{_num(py(v))}" stroke="#000000"/>')
        if k % 2 == 0:
            out.append(f'<text x="{_num(px(v))}" y="{_num(py(0) + 16)}" text-anchor="middle" font-size="10">{v:.1f}</text>')
            out.append(f'<text x="{_num(px(0) - 6)}" y="{_num(py(v) + 3)}" text-anchor="end" font-size="10">{v:.1f}</text>')
    out.append(f'<text x="{_num(px(0.5))}" y="{size - 10}" text-anchor="middle" font-size="12">{escape(pivot_name)} (normalised)</text>')
    out.append(
        f'<text x="14" y="{_num(py(0.5))}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {_num(py(0.5))})">objective value (normalised)</text>'
    )
    for label, k, pts in series:
        c = colour(k)
        out.append(f'<g class="series" data-objective="{escape(label)}" fill="{c}" fill-opacity="0.7">')
        for x, y in pts:
            out.append(f'<circle cx="{_num(px(x))}" cy="{_num(py(y))}" r="2.5"/>')
        out.append("</g>")
    for row, (label, k, _) in enumerate(series):
        y = margin + 10 + row * 18
        out.append(f'<rect x="{size + 5}" y="{y - 8}" width="10" height="10" fill="{colour(k)}"/>')
        out.append(f'<text x="{size + 20}" y="{y + 1}" font-size="12">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def regionmap_svg(layout, values: Sequence[float], fmt: str = "{:.1%}", title: str = "") -> str:
    """Render ``values`` (one per region) onto a :class:`GrayLayout` grid."""
    cell_w, cell_h = 90, 50
    left, top = 80, 50 if title else 30
    gap = 40
    blocks = layout.blocks
    rows, cols = len(blocks[0]), len(blocks[0][0])
    block_w = cols * cell_w
    width = left + len(blocks) * block_w + (len(blocks) - 1) * gap + 20
    height = top + rows * cell_h + 40
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="14">{escape(title)}</text>')
    for b, grid in enumerate(blocks):
        x0 = left + b * (block_w + gap)
        if layout.block_labels[b]:
            out.append(f'<text x="{x0 + block_w / 2:.1f}" y="{top - 16}" text-anchor="middle" font-size="12">{escape(layout.block_labels[b])}</text>')
        for c, label in enumerate(layout.column_labels):
            out.append(f'<text x="{x0 + c * cell_w + cell_w / 2:.1f}" y="{top - 4}" text-anchor="middle" font-size="11">{escape(label)}</text>')
        for r, row in enumerate(grid):
            if b == 0:
                out.append(f'<text x="{left - 6}" y="{top + r * cell_h + cell_h / 2 + 4:.1f}" text-anchor="end" font-size="11">{escape(layout.row_labels[r])}</text>')
            for c, region in enumerate(row):
                bad = bin(region).count("1")
                x, y = x0 + c * cell_w, top + r * cell_h
                text_fill = "#FFFFFF" if bad >= 4 else "#000000"
                out.append(f'<rect x="{x}" y="{y}" width="{cell_w}" height="{cell_h}" fill="{shade(bad)}" stroke="#000000"/>')
                out.append(f'<text x="{x + 4}" y="{y + 14}" font-size="11" fill="{text_fill}">r{region}</text>')
                out.append(f'<text x="{x + cell_w / 2:.1f}" y="{y + 36}" text-anchor="middle" font-size="13" fill="{text_fill}">{fmt.format(values[region])}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def with_meta(svg: str, meta: dict) -> str:
    """Embed ``meta`` as a JSON comment right after the opening tag."""
    comment = json.dumps(meta, sort_keys=True).replace("--", "- -")
    head, _, rest = svg.partition("\n")
    return f"{head}\n<!-- meta: {comment} -->\n{rest}"
