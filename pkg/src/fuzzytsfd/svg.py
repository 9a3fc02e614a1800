"""Dependency-free SVG charts: the Visual TSFD plane and elbow line charts."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Mapping

from .errors import DatasetIOError, InsufficientRangeError, InvalidArgumentError
from .selection import KSweepResult, elbow

WIDTH = 640
HEIGHT = 560
MARGIN_LEFT = 80
MARGIN_RIGHT = 30
MARGIN_TOP = 50
MARGIN_BOTTOM = 70

BLUE = "#1f77b4"
RED = "#d62728"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + step * 1e-9:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _tick_label(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e5 or abs(v) < 1e-3:
        return f"{v:.2e}"
    return f"{v:.6g}"


def _write(path: str | Path, lines: list[str]) -> Path:
    path = Path(path)
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise DatasetIOError(f"cannot write {path}: {exc}") from exc
    return path


class _Frame:
    """Maps data coordinates into the plotting rectangle."""

    def __init__(self, x_lo: float, x_hi: float, y_lo: float, y_hi: float, square: bool = False) -> None:
        self.left = MARGIN_LEFT
        self.right = WIDTH - MARGIN_RIGHT
        self.top = MARGIN_TOP
        self.bottom = HEIGHT - MARGIN_BOTTOM
        if square:
            side = min(self.right - self.left, self.bottom - self.top)
            self.right = self.left + side
            self.top = self.bottom - side
        self.x_lo, self.x_hi = x_lo, x_hi if x_hi > x_lo else x_lo + 1.0
        self.y_lo, self.y_hi = y_lo, y_hi if y_hi > y_lo else y_lo + 1.0

    def px(self, x: float) -> float:
        return self.left + (x - self.x_lo) / (self.x_hi - self.x_lo) * (self.right - self.left)

    def py(self, y: float) -> float:
        return self.bottom - (y - self.y_lo) / (self.y_hi - self.y_lo) * (self.bottom - self.top)

    def axes(
        self,
        title: str,
        x_label: str,
        y_label: str,
        x_ticks: list[tuple[float, str]],
        y_ticks: list[tuple[float, str]],
    ) -> list[str]:
        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
            f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" font-size="18" font-family="sans-serif">{_escape(title)}</text>',
            '<g class="axes" stroke="#000000" stroke-width="1">',
            f'<line x1="{self.left}" y1="{self.bottom}" x2="{self.right}" y2="{self.bottom}"/>',
            f'<line x1="{self.left}" y1="{self.bottom}" x2="{self.left}" y2="{self.top}"/>',
            "</g>",
            '<g class="ticks" font-size="11" font-family="sans-serif">',
        ]
        for t, label in x_ticks:
            x = _fmt(self.px(t))
            out.append(f'<line x1="{x}" y1="{self.bottom}" x2="{x}" y2="{self.bottom + 5}" stroke="#000000"/>')
            out.append(f'<text x="{x}" y="{self.bottom + 18}" text-anchor="middle">{label}</text>')
        for t, label in y_ticks:
            y = _fmt(self.py(t))
            out.append(f'<line x1="{self.left - 5}" y1="{y}" x2="{self.left}" y2="{y}" stroke="#000000"/>')
            out.append(f'<text x="{self.left - 8}" y="{y}" text-anchor="end" dominant-baseline="middle">{label}</text>')
        out.append("</g>")
        mid_x = (self.left + self.right) / 2
        mid_y = (self.top + self.bottom) / 2
        out.append(
            f'<text class="x-label" x="{mid_x:.1f}" y="{HEIGHT - 20}" text-anchor="middle" font-size="14" font-family="sans-serif">{_escape(x_label)}</text>'
        )
        out.append(
            f'<text class="y-label" x="20" y="{mid_y:.1f}" text-anchor="middle" font-size="14" font-family="sans-serif" '
            f'transform="rotate(-90 20 {mid_y:.1f})">{_escape(y_label)}</text>'
        )
        return out


def emit_visual_tsfd_svg(
    result: KSweepResult | Mapping[int, tuple[float, float]],
    path: str | Path,
    title: str = "Visual TSFD",
) -> Path:
    """FB against FI per K, with the FB = FI diagonal and a dashed ray per K.

    ``result`` is a sweep or a ``{K: (FI, FB)}`` mapping. Both axes share one
    scale so the diagonal is drawn at 45 degrees.
    """
    if isinstance(result, KSweepResult):
        points = {k: (e.inertia.fi, e.inertia.fb) for k, e in result.per_k.items()}
    else:
        points = dict(result)
    if not points:
        raise InvalidArgumentError("nothing to plot: empty sweep")
    ks = sorted(points)
    top = max(max(fi, fb) for fi, fb in points.values()) * 1.05 or 1.0
    frame = _Frame(0.0, top, 0.0, top, square=True)
    ticks = [(t, _tick_label(t)) for t in _nice_ticks(0.0, top)]
    lines = frame.axes(title, "FI (fuzzy inertia)", "FB (fuzzy between-inertia)", ticks, ticks)

    ox, oy = _fmt(frame.px(0.0)), _fmt(frame.py(0.0))
    lines.append(
        f'<line class="diagonal" x1="{ox}" y1="{oy}" x2="{_fmt(frame.px(top))}" y2="{_fmt(frame.py(top))}" '
        f'stroke="{RED}" stroke-width="2"/>'
    )
    lines.append('<g class="rays" fill="none">')
    for k in ks:
        fi, fb = points[k]
        lines.append(
            f'<line class="ray" data-k="{k}" x1="{ox}" y1="{oy}" x2="{_fmt(frame.px(fi))}" y2="{_fmt(frame.py(fb))}" '
            f'stroke="{RED}" stroke-width="1" stroke-dasharray="6,4"/>'
        )
    lines.append("</g>")
    coords = " ".join(f"{_fmt(frame.px(points[k][0]))},{_fmt(frame.py(points[k][1]))}" for k in ks)
    lines.append(f'<polyline class="tsfd-curve" points="{coords}" fill="none" stroke="{BLUE}" stroke-width="2"/>')
    lines.append('<g class="markers" font-size="12" font-family="sans-serif">')
    for k in ks:
        x, y = _fmt(frame.px(points[k][0])), _fmt(frame.py(points[k][1]))
        lines.append(f'<circle class="marker" data-k="{k}" cx="{x}" cy="{y}" r="4" fill="{BLUE}"/>')
        lines.append(f'<text class="k-label" x="{x}" y="{y}" dx="6" dy="-6">K={k}</text>')
    lines.append("</g>")
    lines.append("</svg>")
    return _write(path, lines)


def emit_elbow_svg(
    series: Mapping[int, float],
    path: str | Path,
    index_name: str = "TSFD",
    orientation: str = "maximized",
    title: str | None = None,
) -> Path:
    """Line chart of an index against K; the elbow K is circled when it exists."""
    if len(series) < 2:
        raise InvalidArgumentError("elbow chart needs at least 2 points")
    ks = sorted(series)
    vals = [series[k] for k in ks]
    finite = [v for v in vals if math.isfinite(v)]
    if not finite:
        raise InvalidArgumentError("series has no finite values")
    lo, hi = min(finite), max(finite)
    pad = (hi - lo) * 0.08 or abs(hi) * 0.1 or 1.0
    frame = _Frame(ks[0] - 0.5, ks[-1] + 0.5, lo - pad, hi + pad)
    x_ticks = [(float(k), str(k)) for k in ks]
    y_ticks = [(t, _tick_label(t)) for t in _nice_ticks(lo - pad, hi + pad)]
    lines = frame.axes(title or f"Elbow {index_name}", "K", index_name, x_ticks, y_ticks)

    pts = [(k, v) for k, v in zip(ks, vals) if math.isfinite(v)]
    coords = " ".join(f"{_fmt(frame.px(k))},{_fmt(frame.py(v))}" for k, v in pts)
    lines.append(f'<polyline class="index-curve" points="{coords}" fill="none" stroke="{BLUE}" stroke-width="2"/>')
    lines.append('<g class="markers">')
    for k, v in pts:
        lines.append(f'<circle class="marker" data-k="{k}" cx="{_fmt(frame.px(k))}" cy="{_fmt(frame.py(v))}" r="3.5" fill="{BLUE}"/>')
    lines.append("</g>")
    try:
        best = elbow(series, orientation)  # type: ignore[arg-type]
    except InsufficientRangeError:
        best = None
    if best is not None and math.isfinite(series[best]):
        x, y = _fmt(frame.px(best)), _fmt(frame.py(series[best]))
        lines.append(f'<circle class="elbow" data-k="{best}" cx="{x}" cy="{y}" r="9" fill="none" stroke="{RED}" stroke-width="2"/>')
        lines.append(
            f'<text class="elbow-label" x="{x}" y="{y}" dx="12" dy="18" font-size="12" font-family="sans-serif" fill="{RED}">elbow K={best}</text>'
        )
    lines.append("</svg>")
    return _write(path, lines)
