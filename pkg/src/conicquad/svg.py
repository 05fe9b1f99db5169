"""Deterministic SVG rendering of a job's subdivision.

The picture shows the triangle, the conic curve(s), the certified free
pieces filled by case (or the clipped polygons for degenerate conics), and
any internal edges the subdivision introduced. Every coordinate is written
with six decimals and all drawing order is fixed, so the same job always
produces byte-identical output; golden-file tests depend on that.

World coordinates are y-up; SVG is y-down. Points are flipped at the door
(x, y) -> (x, -y) and everything downstream works in flipped coordinates.
"""

from __future__ import annotations

import math

from . import tolerances
from .basecase import degenerate_region_polygons
from .conic import Conic, ConicClass, normalize_conic
from .engine import band_halves
from .geometry import Point, Triangle
from .jobs import JobInputs
from .poly import Polynomial2
from .subdivide import FreeCaseKind, decompose
from .tolerances import Tolerances

CASE_COLORS = {
    FreeCaseKind.NO_BOUNDARY: "#a8d5a2",
    FreeCaseKind.ONE_TOUCH: "#ffd27f",
    FreeCaseKind.ONE_VERTEX: "#c3b1e1",
    FreeCaseKind.TWO_VERTEX: "#9fc5e8",
    FreeCaseKind.THREE_VERTEX: "#f4a7a3",
}

DEGENERATE_COLORS = {
    "full-triangle": "#a8d5a2",
    "halfplane": "#9fc5e8",
    "strip": "#ffd27f",
    "outside-strip": "#c3b1e1",
    "quadrant": "#f4a7a3",
}

CURVE_SAMPLES = 192


def _fmt(v: float) -> str:
    # -0.000000 and 0.000000 are the same point but different bytes
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _flip(p: Point) -> tuple[float, float]:
    return (p[0], -p[1])


def _points_attr(poly: list[Point]) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (_flip(p) for p in poly))


class _Canvas:
    """Collects SVG elements over a viewBox fitted to the triangle."""

    def __init__(self, t: Triangle):
        xs = [v[0] for v in t.vertices]
        ys = [-v[1] for v in t.vertices]
        w = max(xs) - min(xs)
        h = max(ys) - min(ys)
        pad = 0.1 * max(w, h)
        self.x0 = min(xs) - pad
        self.y0 = min(ys) - pad
        self.w = w + 2 * pad
        self.h = h + 2 * pad
        self.diag = math.hypot(self.w, self.h)
        self.stroke = 0.004 * self.diag
        self.font = 0.028 * self.diag
        self.body: list[str] = []

    def add(self, element: str) -> None:
        self.body.append(element)

    def polygon(self, poly: list[Point], fill: str, opacity: float) -> None:
        self.add(
            f'<polygon points="{_points_attr(poly)}" fill="{fill}" '
            f'fill-opacity="{opacity:.2f}" stroke="#444444" '
            f'stroke-width="{_fmt(self.stroke)}" stroke-linejoin="round"/>'
        )

    def polyline(self, pts: list[Point], color: str, dashed: bool = False) -> None:
        if len(pts) < 2:
            return
        dash = f' stroke-dasharray="{_fmt(3 * self.stroke)} {_fmt(2 * self.stroke)}"' if dashed else ""
        self.add(
            f'<polyline points="{_points_attr(pts)}" fill="none" '
            f'stroke="{color}" stroke-width="{_fmt(1.5 * self.stroke)}"{dash}/>'
        )

    def line(self, a: Point, b: Point, color: str, dashed: bool = False) -> None:
        self.polyline([a, b], color, dashed)

    def dot(self, p: Point, color: str) -> None:
        x, y = _flip(p)
        self.add(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(2 * self.stroke)}" '
            f'fill="{color}"/>'
        )

    def label(self, p: Point, text: str) -> None:
        x, y = _flip(p)
        self.add(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="monospace" '
            f'font-size="{_fmt(self.font)}" text-anchor="middle" '
            f'fill="#222222">{text}</text>'
        )

    def render(self) -> str:
        head = (
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'viewBox="{_fmt(self.x0)} {_fmt(self.y0)} {_fmt(self.w)} {_fmt(self.h)}" '
            'width="640">'
        )
        return "\n".join([head, *self.body, "</svg>"]) + "\n"


def _polygon_centroid(poly: list[Point]) -> Point:
    n = len(poly)
    return (sum(p[0] for p in poly) / n, sum(p[1] for p in poly) / n)


def _line_through(functional: tuple[float, float, float], reach: float) -> tuple[Point, Point]:
    """A segment of the zero line of ux*x + uy*y + u0, long enough to cross
    the whole picture."""
    ux, uy, u0 = functional
    nn = math.hypot(ux, uy)
    p0 = (-u0 * ux / (nn * nn), -u0 * uy / (nn * nn))
    d = (-uy / nn, ux / nn)
    return (
        (p0[0] - reach * d[0], p0[1] - reach * d[1]),
        (p0[0] + reach * d[0], p0[1] + reach * d[1]),
    )


def _functional(c: Conic, which: str) -> tuple[float, float, float]:
    m = c.to_standard
    return (m.a, m.b, m.tx) if which == "x" else (m.c, m.d, m.ty)


def _curve_polylines(c: Conic, canvas: _Canvas) -> list[list[Point]]:
    """The conic's zero set as world-coordinate polylines, generously sized
    so they always leave the viewBox (which crops them)."""
    k = c.klass
    center_world = (canvas.x0 + canvas.w / 2.0, -(canvas.y0 + canvas.h / 2.0))
    if k is ConicClass.ELLIPSE:
        a, b = c.params["a"], c.params["b"]
        inv = c.to_standard.inverse()
        pts = []
        for i in range(CURVE_SAMPLES + 1):
            th = 2.0 * math.pi * i / CURVE_SAMPLES
            pts.append(inv((a * math.cos(th), b * math.sin(th))))
        return [pts]
    if k is ConicClass.PARABOLA:
        cc = c.params["c"]
        inv = c.to_standard.inverse()
        origin = inv((0.0, 0.0))
        reach = canvas.diag + math.hypot(
            origin[0] - center_world[0], origin[1] - center_world[1]
        )
        # x range so that both x and y = c x^2 can cross the box
        half = max(reach, math.sqrt(reach / max(abs(cc), 1e-12)))
        pts = []
        for i in range(CURVE_SAMPLES + 1):
            x = -half + 2.0 * half * i / CURVE_SAMPLES
            pts.append(inv((x, cc * x * x)))
        return [pts]
    if k is ConicClass.HYPERBOLA:
        kk = c.params["k"]
        inv = c.to_standard.inverse()
        origin = inv((0.0, 0.0))
        reach = canvas.diag + math.hypot(
            origin[0] - center_world[0], origin[1] - center_world[1]
        )
        r = math.sqrt(abs(kk))
        span = math.log(max(reach, 2.0 * r) / r) + 1.0
        branches = []
        for sign in (1.0, -1.0):
            pts = []
            for i in range(CURVE_SAMPLES + 1):
                u = -span + 2.0 * span * i / CURVE_SAMPLES
                x = sign * r * math.exp(u)
                pts.append(inv((x, kk / x)))
            branches.append(pts)
        return branches
    if k in (ConicClass.SINGLE_LINE, ConicClass.DOUBLE_LINE):
        seg = _line_through(_functional(c, "x"), 2.0 * canvas.diag)
        return [list(seg)]
    if k is ConicClass.PARALLEL_LINES:
        ux, uy, u0 = _functional(c, "x")
        d = c.params["d"]
        return [
            list(_line_through((ux, uy, u0), 2.0 * canvas.diag)),
            list(_line_through((ux, uy, u0 - d), 2.0 * canvas.diag)),
        ]
    if k is ConicClass.CROSSING_LINES:
        return [
            list(_line_through(_functional(c, "x"), 2.0 * canvas.diag)),
            list(_line_through(_functional(c, "y"), 2.0 * canvas.diag)),
        ]
    return []  # EMPTY / CONSTANT_SIGN: nothing to draw; POINT handled by caller


def _draw_layer(
    canvas: _Canvas,
    f: Polynomial2,
    t: Triangle,
    tol: Tolerances,
    curve_color: str,
    opacity: float,
    tag: str,
) -> None:
    c = normalize_conic(f, tol)
    canvas.add(f"<g id=\"{tag}\">")
    if c.is_nondegenerate():
        trace = decompose(c, t, tol)
        for idx, piece in enumerate(trace.pieces):
            canvas.polygon(
                list(piece.triangle.vertices), CASE_COLORS[piece.case.kind], opacity
            )
        for a, b in trace.internal_edges:
            canvas.line(a, b, "#666666", dashed=True)
        for idx, piece in enumerate(trace.pieces):
            canvas.label(
                _polygon_centroid(list(piece.triangle.vertices)),
                f"{idx}:{piece.case.kind.value}",
            )
    else:
        for idx, (label, poly) in enumerate(degenerate_region_polygons(c, t, tol)):
            canvas.polygon(poly, DEGENERATE_COLORS[label], opacity)
            canvas.label(_polygon_centroid(poly), f"{idx}:{label}")
        if c.klass is ConicClass.POINT:
            canvas.dot(c.params["center"], curve_color)
    for pts in _curve_polylines(c, canvas):
        canvas.polyline(pts, curve_color)
    canvas.add("</g>")


def render_subdivision(inputs: JobInputs, tol: Tolerances | None = None) -> str:
    """The SVG document for a parsed job."""
    tol = tol or tolerances.active()
    t = inputs.t
    canvas = _Canvas(t)
    if inputs.band is not None:
        f1, f2 = band_halves(inputs.band)
        _draw_layer(canvas, f1, t, tol, "#1f5fbf", 0.45, "band-lower")
        _draw_layer(canvas, f2, t, tol, "#bf3f1f", 0.45, "band-upper")
    else:
        _draw_layer(canvas, inputs.f, t, tol, "#1f5fbf", 0.85, "region")
    # the original triangle on top, unfilled
    canvas.add(
        f'<polygon points="{_points_attr(list(t.vertices))}" fill="none" '
        f'stroke="#000000" stroke-width="{_fmt(2.0 * canvas.stroke)}" '
        'stroke-linejoin="round"/>'
    )
    return canvas.render()
