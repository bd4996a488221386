"""Tiny deterministic SVG writer for figures.

Only three shape kinds are emitted (path, circle, polyline), data
coordinates are fitted to a 1000x1000 viewBox with a 5% margin preserving
aspect ratio, and floats are formatted with a fixed precision, so repeated
runs of the same experiment produce byte-identical files."""

from __future__ import annotations

import numpy as np

from .errors import DegenerateInput

VIEW = 1000.0
MARGIN = 0.05

COLORS = {
    "domain": "#1f3b73",
    "tile": "#2a9d8f",
    "bisector": "#b3262e",
    "axis": "#8a7a1e",
    "cloud": "#d96529",
    "annulus": "#7a7a7a",
    "orbit": "#274690",
    "seed": "#96633c",
    "region": "#4d8b4d",
}

STROKE_WIDTH = {
    "domain": 3.0,
    "tile": 1.5,
    "bisector": 2.0,
    "axis": 2.0,
    "cloud": 1.0,
    "annulus": 1.0,
    "orbit": 1.5,
    "seed": 1.5,
    "region": 1.5,
}


def _fmt(x: float) -> str:
    s = "%.3f" % float(x)
    return "0.000" if s == "-0.000" else s


class SvgCanvas:
    """Collects shapes in data coordinates; fitted at render time."""

    def __init__(self):
        self._shapes = []
        self._lo = np.array([np.inf, np.inf])
        self._hi = np.array([-np.inf, -np.inf])

    def _track(self, pts: np.ndarray):
        self._lo = np.minimum(self._lo, pts.min(axis=0))
        self._hi = np.maximum(self._hi, pts.max(axis=0))

    def add_polyline(self, pts, kind: str, closed: bool = False):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if len(pts) < 2:
            raise DegenerateInput("polyline needs at least two points")
        self._track(pts)
        self._shapes.append(("polyline", pts, kind, closed))

    def add_path(self, pts, kind: str):
        """Closed filled-free outline rendered as a path element."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if len(pts) < 3:
            raise DegenerateInput("path outline needs at least three points")
        self._track(pts)
        self._shapes.append(("path", pts, kind, True))

    def add_circle(self, center, radius: float, kind: str, filled: bool = False):
        c = np.asarray(center, dtype=float)
        r = float(radius)
        self._track(np.array([c - r, c + r]))
        self._shapes.append(("circle", (c, r, filled), kind, False))

    def render(self) -> str:
        if not self._shapes:
            raise DegenerateInput("empty figure")
        span = self._hi - self._lo
        span[span <= 0] = 1.0
        scale = (1.0 - 2.0 * MARGIN) * VIEW / float(np.max(span))
        pad = MARGIN * VIEW
        extra = 0.5 * ((1.0 - 2.0 * MARGIN) * VIEW - scale * span)

        def tr(p):
            q = (np.atleast_2d(p) - self._lo) * scale
            out = np.empty_like(q)
            out[:, 0] = pad + extra[0] + q[:, 0]
            out[:, 1] = VIEW - (pad + extra[1] + q[:, 1])   # y grows upward
            return out

        lines = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 %d %d">'
            % (int(VIEW), int(VIEW)),
        ]
        for shape, data, kind, closed in self._shapes:
            color = COLORS.get(kind, "#222222")
            width = STROKE_WIDTH.get(kind, 1.5)
            if shape == "circle":
                c, r, filled = data
                cc = tr(c)[0]
                fill = color if filled else "none"
                lines.append(
                    '<circle cx="%s" cy="%s" r="%s" stroke="%s" stroke-width="%s" fill="%s"/>'
                    % (_fmt(cc[0]), _fmt(cc[1]), _fmt(r * scale), color,
                       _fmt(width), fill))
                continue
            pts = tr(data)
            coords = " ".join("%s,%s" % (_fmt(p[0]), _fmt(p[1])) for p in pts)
            if shape == "path":
                d = "M " + " L ".join("%s %s" % (_fmt(p[0]), _fmt(p[1])) for p in pts) + " Z"
                lines.append('<path d="%s" stroke="%s" stroke-width="%s" fill="none"/>'
                             % (d, color, _fmt(width)))
            else:
                if closed:
                    coords += " %s,%s" % (_fmt(pts[0][0]), _fmt(pts[0][1]))
                lines.append(
                    '<polyline points="%s" stroke="%s" stroke-width="%s" fill="none"/>'
                    % (coords, color, _fmt(width)))
        lines.append("</svg>")
        return "\n".join(lines) + "\n"


def domain_outline_xy(domain, n: int = 360) -> np.ndarray:
    """Boundary polyline of a domain in its own chart."""
    pts = domain.boundary_points(n)
    if len(pts) < 3:
        raise DegenerateInput("domain outline needs at least three boundary hits")
    return np.asarray(pts, dtype=float)
