"""Deterministic table emitters: CSV, JSON, and a dependency-free SVG plot.

All numeric formatting is fixed-point so repeated runs with the same seed
produce byte-identical files.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

TABLE_SCHEMA = "table/v1"

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass
class Table:
    """Column-ordered result table with plotting hints in ``meta``."""

    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (float, Fraction)):
        return f"{float(value):.6f}"
    return str(value)


def render_csv(table: Table) -> str:
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(_format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(table: Table) -> str:
    doc = {
        "schema": TABLE_SCHEMA,
        "columns": list(table.columns),
        "rows": [
            [float(v) if isinstance(v, Fraction) else v for v in row] for row in table.rows
        ],
        "meta": table.meta,
    }
    return json.dumps(doc, indent=2) + "\n"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (count - 1)
    return [lo + step * i for i in range(count)]


def render_svg(table: Table) -> str:
    """Line plot of the meta-selected series; axes carry the meta labels."""
    x_col = table.meta.get("x", table.columns[0])
    y_cols = table.meta.get("ys")
    if not y_cols:
        y_cols = [c for c in table.columns[1:] if any(
            isinstance(r[table.columns.index(c)], (int, float, Fraction)) for r in table.rows
        )][:1] or [table.columns[-1]]
    title = table.meta.get("title", "")
    xlabel = table.meta.get("xlabel", x_col)
    ylabel = table.meta.get("ylabel", ", ".join(y_cols))

    width, height = 640, 420
    left, right, top, bottom = 70, 160, 40, 50
    plot_w = width - left - right
    plot_h = height - top - bottom

    xs = [float(v) for v in table.column(x_col)]
    series = {name: [float(v) for v in table.column(name)] for name in y_cols}
    all_y = [v for vals in series.values() for v in vals if math.isfinite(v)]
    if not xs or not all_y:
        xs, all_y = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(all_y + [0.0]), max(all_y)
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0
    if y_hi <= y_lo:
        y_hi = y_lo + 1.0

    def sx(v: float) -> float:
        return left + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return top + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="16" '
        f'font-family="sans-serif">{title}</text>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" '
        f'stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>',
    ]
    for tv in _ticks(x_lo, x_hi):
        px = sx(tv)
        parts.append(
            f'<line x1="{px:.2f}" y1="{top + plot_h}" x2="{px:.2f}" '
            f'y2="{top + plot_h + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{top + plot_h + 20}" text-anchor="middle" '
            f'font-size="11" font-family="sans-serif">{tv:.2f}</text>'
        )
    for tv in _ticks(y_lo, y_hi):
        py = sy(tv)
        parts.append(
            f'<line x1="{left - 5}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{left - 9}" y="{py + 4:.2f}" text-anchor="end" font-size="11" '
            f'font-family="sans-serif">{tv:.2f}</text>'
        )
    parts.append(
        f'<text x="{left + plot_w / 2:.1f}" y="{height - 10}" text-anchor="middle" '
        f'font-size="13" font-family="sans-serif">{xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{top + plot_h / 2:.1f}" text-anchor="middle" font-size="13" '
        f'font-family="sans-serif" transform="rotate(-90 18 {top + plot_h / 2:.1f})">'
        f"{ylabel}</text>"
    )
    for k, (name, vals) in enumerate(series.items()):
        color = _PALETTE[k % len(_PALETTE)]
        points = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, vals))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
        )
        ly = top + 14 + 16 * k
        lx = left + plot_w + 12
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{lx + 24}" y="{ly}" font-size="11" font-family="sans-serif">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


_RENDERERS = {"csv": render_csv, "json": render_json, "svg": render_svg}


def render(table: Table, fmt: str) -> str:
    try:
        renderer = _RENDERERS[fmt]
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}; expected one of {sorted(_RENDERERS)}")
    return renderer(table)


def emit(table: Table, fmt: str, out: str | None = None) -> str:
    """Render and write the table; ``out`` of None or "-" means stdout."""
    text = render(table, fmt)
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    return text


def emit_trials_json(results: Sequence, out: str | None = None) -> str:
    """Write a run's trial results as a JSON document."""
    doc = {"schema": "trials/v1", "results": [r.to_dict() for r in results]}
    text = json.dumps(doc, indent=2) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    return text
