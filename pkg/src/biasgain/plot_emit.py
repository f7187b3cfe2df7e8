"""
Text serializers for sample series and curve families: CSV, JSON and SVG.

All numbers use the shortest decimal that round-trips to the same 64-bit
float (integral values print without a fractional part), so identical
inputs always give identical bytes and parsing the output back is lossless.

SVG output is a small SVG 1.1 subset (``svg``, ``g``, ``rect``,
``polyline``, ``circle``, ``text``) with fixed styling:

* cell border: ``#999999``, 1 px, no fill
* curve: ``#1f4e99``, 1.5 px (families cycle through ``FAMILY_COLORS``)
* knot marker: filled ``#c0392b`` circle of radius 3 px
* labels: 12 px sans-serif, ``#333333``
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .curve_core import (
    MACHINE_EPS,
    CurveParams,
    DomainError,
    ShapeParam,
    _curve,
    schlick_bias,
    schlick_gain,
)
from .curve_tools import Lut, SampleSeries

__all__ = [
    "FormatError",
    "fmt_number",
    "emit_csv",
    "parse_csv",
    "emit_json",
    "parse_json",
    "emit_lut_csv",
    "parse_lut_csv",
    "PlotSpec",
    "FamilySpec",
    "GridCell",
    "grid_cells",
    "family_curves",
    "emit_svg_grid",
    "emit_svg_family",
    "DEFAULT_A_VALUES",
    "DEFAULT_S_VALUES",
    "DEFAULT_T_VALUES",
]

DEFAULT_A_VALUES = (0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99)
DEFAULT_S_VALUES = (0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
DEFAULT_T_VALUES = (0.0, 0.25, 0.5, 0.75, 1.0)

BORDER_STYLE = 'fill="none" stroke="#999999" stroke-width="1"'
CURVE_COLOR = "#1f4e99"
KNOT_STYLE = 'fill="#c0392b"'
KNOT_RADIUS = 3
LABEL_STYLE = 'font-family="sans-serif" font-size="12" fill="#333333"'
FAMILY_COLORS = ("#1f4e99", "#2a9d8f", "#e9c46a", "#f4a261", "#e76f51", "#6a4c93", "#8ab17d")


class FormatError(ValueError):
    """Input text does not match one of the emitted formats."""


def fmt_number(v: float) -> str:
    """
    Shortest round-trip decimal for ``v``.

    >>> fmt_number(1.0), fmt_number(0.5), fmt_number(1 / 6)
    ('1', '0.5', '0.16666666666666666')
    """
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"cannot format non-finite value {v!r}")
    if v.is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def _json_number(v: float):
    v = float(v)
    return int(v) if v.is_integer() and abs(v) < 2**53 else v


# ---------------------------------------------------------------------------
# CSV / JSON
# ---------------------------------------------------------------------------

def emit_csv(series: SampleSeries) -> str:
    lines = ["x,y"]
    lines.extend(f"{fmt_number(x)},{fmt_number(y)}" for x, y in series)
    return "\n".join(lines) + "\n"


def _read_rows(text: str, header: Sequence[str]) -> List[List[float]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != list(header):
        raise FormatError(f"expected header {','.join(header)!r}")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise FormatError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            out.append([float(c) for c in row])
        except ValueError:
            raise FormatError(f"line {lineno}: non-numeric field in {row!r}") from None
    return out


def parse_csv(text: str) -> SampleSeries:
    """Read back the output of :func:`emit_csv`."""
    rows = _read_rows(text, ("x", "y"))
    try:
        return SampleSeries(tuple((x, y) for x, y in rows))
    except DomainError as exc:
        raise FormatError(str(exc)) from None


def emit_json(series: SampleSeries, p: CurveParams) -> str:
    obj = {
        "s": _json_number(p.s),
        "t": _json_number(p.t),
        "points": [[_json_number(x), _json_number(y)] for x, y in series],
    }
    return json.dumps(obj, separators=(",", ":"))


def parse_json(text: str) -> Tuple[SampleSeries, Optional[CurveParams]]:
    """Read back the output of :func:`emit_json`; ``s``/``t`` are optional on input."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or not isinstance(obj.get("points"), list):
        raise FormatError("expected an object with a 'points' array")
    try:
        pts = []
        for item in obj["points"]:
            if not isinstance(item, list) or len(item) != 2:
                raise FormatError(f"each point must be an [x, y] pair, got {item!r}")
            pts.append((float(item[0]), float(item[1])))
        series = SampleSeries(tuple(pts))
        params = CurveParams(obj["s"], obj["t"]) if "s" in obj and "t" in obj else None
    except (DomainError, TypeError) as exc:
        raise FormatError(str(exc)) from None
    return series, params


def emit_lut_csv(lut: Lut) -> str:
    lines = ["i,x,y"]
    lines.extend(f"{i},{fmt_number(x)},{fmt_number(y)}"
                 for i, (x, y) in enumerate(zip(lut.knots(), lut.values)))
    return "\n".join(lines) + "\n"


def parse_lut_csv(text: str) -> List[Tuple[int, float, float]]:
    rows = _read_rows(text, ("i", "x", "y"))
    out = []
    for i, x, y in rows:
        if not i.is_integer():
            raise FormatError(f"row index must be an integer, got {i!r}")
        out.append((int(i), x, y))
    return out


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

def _dims(width, height, margin):
    for name, v in (("width", width), ("height", height), ("margin", margin)):
        if isinstance(v, bool) or int(v) != v:
            raise DomainError(f"{name} must be an integer, got {v!r}")
    if width < 64 or height < 64:
        raise DomainError(f"width and height must be >= 64, got {width}x{height}")
    if margin < 0 or 2 * margin >= min(width, height):
        raise DomainError(f"margin {margin} does not fit a {width}x{height} canvas")


def _samples(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"samples per curve must be an integer >= 2, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class PlotSpec:
    """Small-multiples grid: one row per slope, one column per threshold."""

    width: int = 820
    height: int = 1040
    margin: int = 60
    s_values: Tuple[float, ...] = DEFAULT_S_VALUES
    t_values: Tuple[float, ...] = DEFAULT_T_VALUES
    samples_per_curve: int = 129
    show_knots: bool = True

    def __post_init__(self):
        _dims(self.width, self.height, self.margin)
        _samples(self.samples_per_curve)
        s_values = tuple(float(s) for s in self.s_values)
        t_values = tuple(float(t) for t in self.t_values)
        if not s_values or not t_values:
            raise DomainError("s_values and t_values must be non-empty")
        for s in s_values:
            for t in t_values:
                CurveParams(s, t)
        object.__setattr__(self, "s_values", s_values)
        object.__setattr__(self, "t_values", t_values)


@dataclass(frozen=True)
class FamilySpec:
    """One unit square holding a bias or gain curve per shape value."""

    kind: str = "bias"
    a_values: Tuple[float, ...] = DEFAULT_A_VALUES
    width: int = 480
    height: int = 480
    margin: int = 40
    samples_per_curve: int = 257

    def __post_init__(self):
        if self.kind not in ("bias", "gain"):
            raise DomainError(f"kind must be 'bias' or 'gain', got {self.kind!r}")
        _dims(self.width, self.height, self.margin)
        _samples(self.samples_per_curve)
        a_values = tuple(ShapeParam(a).a for a in self.a_values)
        if not a_values:
            raise DomainError("a_values must be non-empty")
        object.__setattr__(self, "a_values", a_values)


@dataclass(frozen=True)
class Box:
    """Screen-space placement of the unit square: left, top and side length in pixels."""

    left: float
    top: float
    side: float

    def to_px(self, x: float, y: float) -> Tuple[float, float]:
        return self.left + x * self.side, self.top + (1.0 - y) * self.side

    def from_px(self, px: float, py: float) -> Tuple[float, float]:
        return (px - self.left) / self.side, 1.0 - (py - self.top) / self.side


@dataclass(frozen=True)
class GridCell:
    row: int
    col: int
    params: CurveParams
    series: SampleSeries
    knot: Tuple[float, float]
    box: Box


def _cell_box(left, top, cell_w, cell_h) -> Box:
    pad = 0.08 * min(cell_w, cell_h)
    side = min(cell_w, cell_h) - 2 * pad
    return Box(left + (cell_w - side) / 2, top + (cell_h - side) / 2, side)


def grid_cells(spec: PlotSpec) -> List[GridCell]:
    """Curve data and placement for every cell, rows in ``s_values`` order."""
    rows, cols = len(spec.s_values), len(spec.t_values)
    cell_w = (spec.width - 2 * spec.margin) / cols
    cell_h = (spec.height - 2 * spec.margin) / rows
    n = spec.samples_per_curve - 1
    xs = [i / n for i in range(n + 1)]
    cells = []
    for r, s in enumerate(spec.s_values):
        for c, t in enumerate(spec.t_values):
            series = SampleSeries(tuple((x, _curve(x, s, t, MACHINE_EPS)) for x in xs))
            box = _cell_box(spec.margin + c * cell_w, spec.margin + r * cell_h, cell_w, cell_h)
            knot = (t, _curve(t, s, t, MACHINE_EPS))
            cells.append(GridCell(r, c, CurveParams(s, t), series, knot, box))
    return cells


def family_curves(spec: FamilySpec) -> List[Tuple[float, SampleSeries]]:
    fn = schlick_bias if spec.kind == "bias" else schlick_gain
    n = spec.samples_per_curve - 1
    xs = [i / n for i in range(n + 1)]
    return [(a, SampleSeries(tuple((x, fn(x, a)) for x in xs))) for a in spec.a_values]


def _points_attr(series: SampleSeries, box: Box) -> str:
    return " ".join(f"{fmt_number(px)},{fmt_number(py)}"
                    for px, py in (box.to_px(x, y) for x, y in series))


def _border(box: Box) -> str:
    return (f'<rect x="{fmt_number(box.left)}" y="{fmt_number(box.top)}" '
            f'width="{fmt_number(box.side)}" height="{fmt_number(box.side)}" {BORDER_STYLE}/>')


def _text(x: float, y: float, label: str, anchor: str = "middle") -> str:
    return (f'<text x="{fmt_number(x)}" y="{fmt_number(y)}" text-anchor="{anchor}" '
            f'{LABEL_STYLE}>{escape(label)}</text>')


def _document(width: int, height: int, body: List[str]) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def emit_svg_grid(spec: PlotSpec) -> str:
    """
    Small-multiples SVG of the generalized curve.

    Each cell is a ``<g class="cell">`` carrying ``data-s``/``data-t`` and
    holding the unit-square border, the curve polyline and (when
    ``show_knots``) a circle at ``(t, curve(t))``.  Column headers give
    ``t`` and row headers give ``s``.
    """
    cells = grid_cells(spec)
    body = []
    for cell in cells:
        s, t = cell.params
        body.append(f'<g class="cell" data-row="{cell.row}" data-col="{cell.col}" '
                    f'data-s="{fmt_number(s)}" data-t="{fmt_number(t)}">')
        body.append(_border(cell.box))
        body.append(f'<polyline fill="none" stroke="{CURVE_COLOR}" stroke-width="1.5" '
                    f'points="{_points_attr(cell.series, cell.box)}"/>')
        if spec.show_knots:
            cx, cy = cell.box.to_px(*cell.knot)
            body.append(f'<circle cx="{fmt_number(cx)}" cy="{fmt_number(cy)}" '
                        f'r="{KNOT_RADIUS}" {KNOT_STYLE}/>')
        body.append("</g>")
    cols = len(spec.t_values)
    for cell in cells[:cols]:
        b = cell.box
        body.append(_text(b.left + b.side / 2, b.top - 6, f"t = {fmt_number(cell.params.t)}"))
    for cell in cells[::cols]:
        b = cell.box
        body.append(_text(b.left - 6, b.top + b.side / 2, f"s = {fmt_number(cell.params.s)}", "end"))
    return _document(spec.width, spec.height, body)


def emit_svg_family(spec: FamilySpec) -> str:
    """One polyline per ``a`` value of Schlick's bias or gain, drawn in a shared unit square."""
    side = min(spec.width, spec.height) - 2 * spec.margin
    box = Box((spec.width - side) / 2, (spec.height - side) / 2, side)
    body = [_border(box), _text(spec.width / 2, box.top - 12, f"{spec.kind}(x, a)")]
    for k, (a, series) in enumerate(family_curves(spec)):
        color = FAMILY_COLORS[k % len(FAMILY_COLORS)]
        body.append(f'<polyline data-a="{fmt_number(a)}" fill="none" stroke="{color}" '
                    f'stroke-width="1.5" points="{_points_attr(series, box)}"/>')
    return _document(spec.width, spec.height, body)
