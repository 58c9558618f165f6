"""Deterministic small-multiples SVG rendering of cumulative return curves.

One cell per instrument: blue = cumulative overnight returns, green =
cumulative intraday returns, both starting at 0.  The linear vertical axis
of each cell runs from exactly -1 up to the largest cumulative return that
cell achieves; the log variant plots 1 + c on a log10 axis and refuses
curves touching -1.  Output is plain SVG text assembled with fixed number
formatting, so identical inputs give byte-identical documents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .errors import RenderError
from .formatting import format_unity
from .returns import CumulativeCurves

OVERNIGHT_COLOR = "blue"
INTRADAY_COLOR = "green"


@dataclass(frozen=True)
class PlotSpec:
    rows: int
    cols: int
    y_scale: str = "linear"  # or "log"
    cell_width: int = 170
    cell_height: int = 120
    annotate: bool = True
    max_points: int = 400  # per curve; longer curves are downsampled

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be >= 1")
        if self.y_scale not in ("linear", "log"):
            raise ValueError("y_scale must be 'linear' or 'log'")
        if self.max_points < 2:
            raise ValueError("max_points must be >= 2")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _downsample(values: np.ndarray, max_points: int) -> np.ndarray:
    if len(values) <= max_points:
        return values
    idx = np.unique(np.linspace(0, len(values) - 1, max_points).round().astype(int))
    return values[idx]


def _cell_elements(
    curves: CumulativeCurves, spec: PlotSpec, x0: float, y0: float
) -> list[str]:
    pad_top, pad_bottom, pad_side = 14.0, 13.0, 5.0
    inner_w = spec.cell_width - 2 * pad_side
    inner_h = spec.cell_height - pad_top - pad_bottom

    overnight = _downsample(curves.overnight, spec.max_points)
    intraday = _downsample(curves.intraday, spec.max_points)

    if spec.y_scale == "linear":
        lo = -1.0
        hi = float(max(overnight.max(), intraday.max()))
        hi += 0.04 * (hi - lo)  # headroom so the top of a curve is not clipped

        def transform(c: np.ndarray) -> np.ndarray:
            return np.asarray(c, dtype=np.float64)

    else:
        least = float(min(overnight.min(), intraday.min()))
        if least <= -1.0:
            raise RenderError(
                f"{curves.instrument_id}: log scale requires all 1+c > 0 "
                f"(minimum cumulative return is {least})"
            )

        def transform(c: np.ndarray) -> np.ndarray:
            return np.log10(1.0 + np.asarray(c, dtype=np.float64))

        lo = float(min(transform(overnight).min(), transform(intraday).min()))
        hi = float(max(transform(overnight).max(), transform(intraday).max()))
        span = max(hi - lo, 0.02)
        lo -= 0.05 * span
        hi += 0.05 * span

    def y_pixel(values: np.ndarray) -> np.ndarray:
        return y0 + pad_top + inner_h * (hi - transform(values)) / (hi - lo)

    def polyline(values: np.ndarray, color: str) -> str:
        xs = x0 + pad_side + inner_w * np.arange(len(values)) / max(len(values) - 1, 1)
        ys = y_pixel(values)
        points = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in zip(xs, ys))
        return (
            f'<polyline fill="none" stroke="{color}" stroke-width="1" '
            f'points="{points}"/>'
        )

    elements = [
        f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{spec.cell_width}" '
        f'height="{spec.cell_height}" fill="white" stroke="#cccccc" stroke-width="0.5"/>'
    ]
    zero = transform(np.zeros(1))[0]
    if lo <= zero <= hi:
        zero_y = _fmt(y0 + pad_top + inner_h * (hi - zero) / (hi - lo))
        elements.append(
            f'<line x1="{_fmt(x0 + pad_side)}" y1="{zero_y}" '
            f'x2="{_fmt(x0 + pad_side + inner_w)}" y2="{zero_y}" '
            f'stroke="#dddddd" stroke-width="0.5"/>'
        )
    elements.append(polyline(overnight, OVERNIGHT_COLOR))
    elements.append(polyline(intraday, INTRADAY_COLOR))
    elements.append(
        f'<text x="{_fmt(x0 + spec.cell_width / 2)}" y="{_fmt(y0 + 10)}" '
        f'font-family="sans-serif" font-size="8" text-anchor="middle">'
        f"{escape(curves.instrument_id)}</text>"
    )
    if spec.annotate:
        final_o = escape(format_unity(float(curves.overnight[-1])))
        final_i = escape(format_unity(float(curves.intraday[-1])))
        baseline = _fmt(y0 + spec.cell_height - 3)
        elements.append(
            f'<text x="{_fmt(x0 + pad_side)}" y="{baseline}" '
            f'font-family="sans-serif" font-size="7" fill="{OVERNIGHT_COLOR}">'
            f"{final_o}</text>"
        )
        elements.append(
            f'<text x="{_fmt(x0 + spec.cell_width - pad_side)}" y="{baseline}" '
            f'font-family="sans-serif" font-size="7" fill="{INTRADAY_COLOR}" '
            f'text-anchor="end">{final_i}</text>'
        )
    return elements


def render_grid(curves: Sequence[CumulativeCurves], spec: PlotSpec) -> str:
    """Render a rows x cols grid of curve cells as an SVG 1.1 document."""
    if len(curves) > spec.rows * spec.cols:
        raise ValueError(
            f"{len(curves)} curves do not fit a {spec.rows}x{spec.cols} grid"
        )
    width = spec.cols * spec.cell_width
    height = spec.rows * spec.cell_height
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    for k, cell in enumerate(curves):
        row, col = divmod(k, spec.cols)
        parts.extend(
            _cell_elements(cell, spec, col * spec.cell_width, row * spec.cell_height)
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def grid_shape(count: int, cols: int = 5) -> tuple[int, int]:
    """Default layout: fixed column count, as many rows as needed."""
    cols = max(1, min(cols, count))
    return math.ceil(count / cols), cols
