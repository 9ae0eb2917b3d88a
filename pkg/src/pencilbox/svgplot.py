"""Static SVG rendering of a trajectory, no plotting library involved.

The output is a standalone SVG 1.1 document with a fixed 800x500 view box:
one polyline per series (income, consumption, investment), a plain axis
frame, tick labels, and a small legend.  Coordinates are formatted with
three decimals, so identical input rows always produce identical bytes.

``PlotLayout`` exposes the data-to-pixel transform that the polylines use;
tests (and anyone post-processing the files) can map data points to pixel
coordinates and back without parsing the geometry out of the document.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["VIEW_W", "VIEW_H", "PlotLayout", "layout_for_rows", "render_svg", "write_svg"]

VIEW_W = 800
VIEW_H = 500
MARGIN_LEFT = 60
MARGIN_RIGHT = 20
MARGIN_TOP = 20
MARGIN_BOTTOM = 40

_SERIES = (
    ("T", "#1f77b4", lambda r: r.T),
    ("C", "#ff7f0e", lambda r: r.C),
    ("I", "#2ca02c", lambda r: r.I),
)


@dataclass(frozen=True)
class PlotLayout:
    """Affine map from data coordinates (k, value) to pixel coordinates."""

    k_min: float
    k_max: float
    y_min: float
    y_max: float

    @property
    def plot_width(self) -> float:
        return VIEW_W - MARGIN_LEFT - MARGIN_RIGHT

    @property
    def plot_height(self) -> float:
        return VIEW_H - MARGIN_TOP - MARGIN_BOTTOM

    def x_px(self, k: float) -> float:
        span = self.k_max - self.k_min
        return MARGIN_LEFT + (k - self.k_min) / span * self.plot_width

    def y_px(self, y: float) -> float:
        span = self.y_max - self.y_min
        return MARGIN_TOP + (self.y_max - y) / span * self.plot_height

    def y_data(self, py: float) -> float:
        span = self.y_max - self.y_min
        return self.y_max - (py - MARGIN_TOP) / self.plot_height * span


def layout_for_rows(rows) -> PlotLayout:
    """Axis window: exact in k, padded 5 percent in y, never degenerate."""
    values = [pick(r) for _, _, pick in _SERIES for r in rows if pick(r) is not None]
    lo, hi = min(values), max(values)
    if hi - lo < 1e-12:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    k_min, k_max = rows[0].k, rows[-1].k
    if k_max == k_min:
        k_max = k_min + 1
    return PlotLayout(k_min=float(k_min), k_max=float(k_max), y_min=lo - pad, y_max=hi + pad)


def _ticks(lo: float, hi: float, count: int):
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def _polyline(layout: PlotLayout, rows, pick, color: str) -> str:
    points = " ".join(
        f"{layout.x_px(r.k):.3f},{layout.y_px(pick(r)):.3f}"
        for r in rows
        if pick(r) is not None
    )
    return (
        f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
    )


def render_svg(rows, title: str | None = None) -> str:
    """The complete SVG document for a list of trajectory rows."""
    if not rows:
        raise ValueError("cannot plot an empty trajectory")
    layout = layout_for_rows(rows)
    left, top = MARGIN_LEFT, MARGIN_TOP
    right = VIEW_W - MARGIN_RIGHT
    bottom = VIEW_H - MARGIN_BOTTOM

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{VIEW_W}" height="{VIEW_H}" viewBox="0 0 {VIEW_W} {VIEW_H}">',
        f'<rect x="0" y="0" width="{VIEW_W}" height="{VIEW_H}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{layout.plot_width:.0f}" '
        f'height="{layout.plot_height:.0f}" fill="none" stroke="#333333"/>',
    ]
    if title:
        parts.append(
            f'<text x="{(left + right) / 2:.1f}" y="15" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{title}</text>'
        )

    for y in _ticks(layout.y_min, layout.y_max, 6):
        py = layout.y_px(y)
        parts.append(
            f'<line x1="{left - 4}" y1="{py:.3f}" x2="{left}" y2="{py:.3f}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{left - 8}" y="{py + 4:.3f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{y:.6g}</text>'
        )
    tick_count = min(11, int(layout.k_max - layout.k_min) + 1)
    for k in _ticks(layout.k_min, layout.k_max, max(tick_count, 2)):
        px = layout.x_px(k)
        parts.append(
            f'<line x1="{px:.3f}" y1="{bottom}" x2="{px:.3f}" y2="{bottom + 4}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{px:.3f}" y="{bottom + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{k:.6g}</text>'
        )
    parts.append(
        f'<text x="{(left + right) / 2:.1f}" y="{VIEW_H - 8}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">year k</text>'
    )

    for name, color, pick in _SERIES:
        parts.append(_polyline(layout, rows, pick, color))

    for i, (name, color, _) in enumerate(_SERIES):
        lx = right - 150 + 50 * i
        parts.append(
            f'<line x1="{lx}" y1="{top + 12}" x2="{lx + 16}" y2="{top + 12}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{lx + 20}" y="{top + 16}" font-family="sans-serif" '
            f'font-size="12">{name}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(rows, path: str, title: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_svg(rows, title=title))
