"""Static SVG line charts from sweep CSV files.

The SVG is written by hand with fixed-precision coordinates, so the same CSV
always gives the same bytes.
"""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .sweep import read_table

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 90, 170, 40, 70
N_TICKS = 6
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


class PlotError(ValueError):
    """The CSV cannot be drawn as requested."""


def _num(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise PlotError(f"non-numeric value {text!r}") from exc


def _group_key(text: str):
    # numeric groups sort numerically, everything else as text
    try:
        return (0, float(text), text)
    except ValueError:
        return (1, 0.0, text)


def _tick(v: float) -> str:
    return f"{v:.4g}"


def render_svg(records: list[dict[str, str]], columns: list[str], x: str, y: str, group_by: str | None) -> str:
    for col in (x, y) + ((group_by,) if group_by else ()):
        if col not in columns:
            raise PlotError(f"missing column {col!r}; available: {', '.join(columns)}")
    if len(records) < 2:
        raise PlotError(f"need at least 2 rows to draw a line, got {len(records)}")

    groups: dict[str, list[tuple[float, float]]] = {}
    for rec in records:
        xv, yv = _num(rec[x]), _num(rec[y])
        if math.isfinite(xv) and math.isfinite(yv):
            groups.setdefault(rec[group_by] if group_by else "", []).append((xv, yv))
    if not groups:
        raise PlotError("no finite points to draw")
    xs = [p[0] for pts in groups.values() for p in pts]
    ys = [p[1] for pts in groups.values() for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    if not x1 > x0:
        raise PlotError(f"degenerate data: {x} takes a single value")
    if not y1 > y0:
        # flat curves still plot, centred in a unit band
        y0, y1 = y0 - 0.5, y1 + 0.5

    pw, ph = WIDTH - MARGIN_L - MARGIN_R, HEIGHT - MARGIN_T - MARGIN_B

    def px(v):
        return MARGIN_L + (v - x0) / (x1 - x0) * pw

    def py(v):
        return MARGIN_T + (y1 - v) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for i in range(N_TICKS):
        t = i / (N_TICKS - 1)
        xv, yv = x0 + t * (x1 - x0), y0 + t * (y1 - y0)
        X, Y = px(xv), py(yv)
        base = MARGIN_T + ph
        out.append(f'<line x1="{X:.2f}" y1="{base}" x2="{X:.2f}" y2="{base + 6}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{base + 20}" text-anchor="middle">{_tick(xv)}</text>')
        out.append(f'<line x1="{MARGIN_L - 6}" y1="{Y:.2f}" x2="{MARGIN_L}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_L - 10}" y="{Y + 4:.2f}" text-anchor="end">{_tick(yv)}</text>')
    out.append(
        f'<text x="{MARGIN_L + pw / 2:.2f}" y="{HEIGHT - 20}" text-anchor="middle" font-size="14">{escape(x)}</text>'
    )
    out.append(
        f'<text x="20" y="{MARGIN_T + ph / 2:.2f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 20 {MARGIN_T + ph / 2:.2f})">{escape(y)}</text>'
    )

    for i, key in enumerate(sorted(groups, key=_group_key)):
        pts = sorted(groups[key])
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        ly = MARGIN_T + 20 + 22 * i
        lx = WIDTH - MARGIN_R + 15
        label = f"{group_by} = {key}" if group_by else y
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 32}" y="{ly + 4}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_csv(csv_path: str | Path, svg_path: str | Path, x: str = "omega", y: str = "mana",
             group_by: str | None = "ell") -> int:
    """Write the chart and return the number of polylines drawn."""
    columns, records = read_table(csv_path)
    svg = render_svg(records, columns, x, y, group_by)
    Path(svg_path).write_text(svg, encoding="utf-8")
    return svg.count("<polyline")
