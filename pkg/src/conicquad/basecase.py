"""Closed-form integration over free triangles and degenerate-conic regions.

Once subdivision has produced triangles the curve cannot cross, every
integral here is exact up to rounding. The pieces:

* full-interior ellipse integrals via polar moments (the only place an
  axis scaling is used: the domain is the whole interior, so there is no
  cancellation between large quantities to worry about);
* chord regions, bounded by a conic arc and the chord between two points
  on the curve, evaluated in each family's standard frame: circular
  segments as sector-minus-triangle, parabola and hyperbola segments as
  iterated integrals with polynomial (plus one logarithm) antiderivatives;
* the free-triangle dispatch that decides which of those closed forms a
  certified-free piece needs, if any;
* degenerate conics (line pairs, single lines, point/empty cases), where
  the region is a polygon and halfplane clipping does everything.

Sign conventions follow the classifier: f = lam * (standard form mapped
back to world coordinates), so the sign of lam says which side of the
curve f is positive on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import tolerances
from .conic import (
    Conic,
    ConicClass,
    PointLocation,
    conic_segment_intersections,
    point_in_triangle,
)
from .errors import DegenerateTriangle, InternalError
from .geometry import (
    AffineMap2,
    Point,
    Triangle,
    cross,
    midpoint,
    norm,
    sub,
)
from .poly import Polynomial2, signed_triangle_integral, triangle_integral
from .subdivide import FreeCase, FreeCaseKind, Freedom, triangle_freedom
from .tolerances import Tolerances

# Chords shorter than this (relative to the frame scale) are refused: the
# bounded region between chord and arc is numerically meaningless.
CHORD_MIN_SEPARATION = 1e-12

# Operand-vs-result ratio beyond which a cancellation warning is recorded
# by the engine; exported here so the chord routines can report operands.
CANCELLATION_RATIO = 1e3


class EllipsePosition(Enum):
    TRIANGLE_INSIDE = "TriangleInsideEllipse"
    ELLIPSE_INSIDE = "EllipseInsideTriangle"
    DISJOINT = "Disjoint"


@dataclass(frozen=True)
class ChordRegion:
    """Region bounded by a conic arc and the chord between p1 and p2.

    p1 and p2 are given in the family's working frame: the radius-r circle
    frame for ellipses (r = sqrt(a*b), reached by an extra det-1 axis
    scaling), the y = c*x^2 frame for parabolas, the x*y = k asymptote
    frame for hyperbolas. side_sign only matters for circles, where the
    chord bounds a segment on each side: +1 picks the segment to the left
    of the directed chord p1 -> p2 (positive cross product side), -1 the
    right. Parabola and hyperbola chords bound a single finite region, so
    the field is ignored there.
    """

    conic: Conic
    p1: Point
    p2: Point
    side_sign: float = 1.0


# ---------------------------------------------------------------------------
# trig moments and the cos^i sin^j linearization table


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def trig_moment(i: int, j: int) -> float:
    """Integral of cos^i(t) sin^j(t) over a full turn, in closed form."""
    if i < 0 or j < 0:
        raise ValueError("trig_moment needs nonnegative exponents")
    if i % 2 or j % 2:
        return 0.0
    num = _double_factorial(i - 1) * _double_factorial(j - 1)
    return 2.0 * math.pi * num / _double_factorial(i + j)


# cos^i sin^j expanded over the basis {cos(k t), sin(k t)} with exact
# rational coefficients. Keys are ('c', k) or ('s', k).
_TrigCombo = dict[tuple[str, int], Fraction]

_HALF = Fraction(1, 2)


def _combo_add(dst: _TrigCombo, kind: str, k: int, w: Fraction) -> None:
    if k < 0:
        if kind == "s":
            k, w = -k, -w
        else:
            k = -k
    if kind == "s" and k == 0:
        return
    key = (kind, k)
    dst[key] = dst.get(key, Fraction(0)) + w
    if dst[key] == 0:
        del dst[key]


def _combo_mul_cos(src: _TrigCombo) -> _TrigCombo:
    out: _TrigCombo = {}
    for (kind, k), w in src.items():
        _combo_add(out, kind, k + 1, w * _HALF)
        _combo_add(out, kind, k - 1, w * _HALF)
    return out


def _combo_mul_sin(src: _TrigCombo) -> _TrigCombo:
    out: _TrigCombo = {}
    for (kind, k), w in src.items():
        if kind == "c":
            _combo_add(out, "s", k + 1, w * _HALF)
            _combo_add(out, "s", k - 1, -w * _HALF)
        else:
            _combo_add(out, "c", k - 1, w * _HALF)
            _combo_add(out, "c", k + 1, -w * _HALF)
    return out


def _build_trig_table(max_total: int) -> dict[tuple[int, int], _TrigCombo]:
    table: dict[tuple[int, int], _TrigCombo] = {(0, 0): {("c", 0): Fraction(1)}}
    for total in range(1, max_total + 1):
        for i in range(total + 1):
            j = total - i
            if i > 0:
                table[(i, j)] = _combo_mul_cos(table[(i - 1, j)])
            else:
                table[(i, j)] = _combo_mul_sin(table[(0, j - 1)])
    return table


_TRIG_TABLE = _build_trig_table(6)
_TRIG_CORRUPTION = 0.0


def set_trig_table_corruption(amount: float) -> None:
    """Testing hook: skew the linearization table by a relative amount.

    The self-test uses this to prove it can catch a broken build; any
    nonzero amount makes circular-segment values visibly wrong. Pass 0.0
    to restore exact behavior.
    """
    global _TRIG_CORRUPTION
    _TRIG_CORRUPTION = float(amount)


def _trig_combo(i: int, j: int) -> _TrigCombo:
    combo = _TRIG_TABLE.get((i, j))
    if combo is None:
        # extend on demand; integrands cap at degree 4 so this is unused in
        # practice, but the construction is generic
        need = i + j
        bigger = _build_trig_table(need)
        _TRIG_TABLE.update(bigger)
        combo = _TRIG_TABLE[(i, j)]
    return combo


def _trig_arc_integral(i: int, j: int, alpha: float, beta: float) -> float:
    """Integral of cos^i sin^j from alpha to beta, exactly linearized."""
    parts = []
    skew = 1.0 + _TRIG_CORRUPTION
    for (kind, k), w in _trig_combo(i, j).items():
        wf = float(w) * skew
        if kind == "c":
            if k == 0:
                parts.append(wf * (beta - alpha))
            else:
                parts.append(wf * (math.sin(k * beta) - math.sin(k * alpha)) / k)
        else:
            parts.append(wf * (math.cos(k * alpha) - math.cos(k * beta)) / k)
    return math.fsum(parts)


# ---------------------------------------------------------------------------
# ellipse interior and position


def ellipse_interior_integral(g: Polynomial2, c: Conic) -> float:
    """Integral of g over the full interior of an ellipse.

    Pull back to the standard frame (rigid), then scale axes to the unit
    disc. The scaling is safe here: the integrand is evaluated over the
    whole disc, there is no subtraction of nearby large values.
    """
    if c.klass is not ConicClass.ELLIPSE:
        raise ValueError(f"ellipse_interior_integral got {c.klass.value}")
    a = c.params["a"]
    b = c.params["b"]
    g_std = g.compose(c.to_standard.inverse())
    parts = []
    for (i, j), coeff in g_std.terms():
        m = trig_moment(i, j)
        if m != 0.0:
            parts.append(coeff * (a ** (i + 1)) * (b ** (j + 1)) * m / (i + j + 2))
    return math.fsum(parts)


def ellipse_triangle_position(
    c: Conic, t: Triangle, tol: Tolerances | None = None
) -> EllipsePosition:
    """Relative position of an ellipse and a triangle whose sides it does
    not cross: triangle inside, ellipse inside, or disjoint closures.

    Mapping the ellipse to the unit circle makes both checks one-liners:
    a vertex strictly within distance 1 of the center means the whole
    (crossing-free) triangle is inside; otherwise the ellipse is inside
    exactly when its center is, and disjoint otherwise.
    """
    if c.klass is not ConicClass.ELLIPSE:
        raise ValueError(f"ellipse_triangle_position got {c.klass.value}")
    tol = tol or tolerances.active()
    a = c.params["a"]
    b = c.params["b"]
    to_circle = AffineMap2(1.0 / a, 0.0, 0.0, 1.0 / b).compose(c.to_standard)
    imgs = [to_circle(v) for v in t.vertices]
    if any(norm(q) < 1.0 - tol.eps_on for q in imgs):
        return EllipsePosition.TRIANGLE_INSIDE
    loc = point_in_triangle((0.0, 0.0), Triangle(*imgs), tol)
    if loc is PointLocation.INSIDE:
        return EllipsePosition.ELLIPSE_INSIDE
    if loc is PointLocation.BORDER:
        # center on a side would force that side to cross the curve, which
        # contradicts the crossing-free precondition
        raise InternalError("ellipse center on the triangle boundary")
    return EllipsePosition.DISJOINT


# ---------------------------------------------------------------------------
# chord regions


def circle_segment_integral(g: Polynomial2, region: ChordRegion) -> float:
    """Integral of g over a circular segment, as sector minus triangle.

    Works in the radius-r circle frame of the region's ellipse. The sector
    from the first to the second chord endpoint (in counterclockwise angle
    order chosen by side_sign) equals the center triangle plus the
    segment, with the triangle integral signed so the identity holds for
    major segments too.
    """
    c = region.conic
    if c.klass is not ConicClass.ELLIPSE:
        raise ValueError("circle segments live in an ellipse's circle frame")
    r = math.sqrt(c.params["a"] * c.params["b"])
    p1, p2 = region.p1, region.p2
    for p in (p1, p2):
        if abs(norm(p) - r) > 1e-6 * r:
            raise ValueError(f"chord endpoint {p} is not on the radius-{r} circle")
    if norm(sub(p1, p2)) <= CHORD_MIN_SEPARATION * r:
        raise ValueError("degenerate chord: endpoints coincide")
    if region.side_sign == 0.0:
        raise ValueError("side_sign must be nonzero")
    # the counterclockwise arc from p1 to p2 bounds the segment on the
    # right of the directed chord p1->p2; flip the roles for the left side
    if region.side_sign < 0.0:
        pa, pb = p1, p2
    else:
        pa, pb = p2, p1
    alpha = math.atan2(pa[1], pa[0])
    beta = math.atan2(pb[1], pb[0])
    while beta <= alpha:
        beta += 2.0 * math.pi
    parts = []
    for (i, j), coeff in g.terms():
        arc = _trig_arc_integral(i, j, alpha, beta)
        if arc != 0.0:
            parts.append(coeff * r ** (i + j + 2) / (i + j + 2) * arc)
    sector = math.fsum(parts)
    return sector - signed_triangle_integral(g, (0.0, 0.0), pa, pb)


def _poly_on_affine_line(g: Polynomial2, slope: float, intercept: float) -> Polynomial2:
    """g(x, slope*x + intercept) as a polynomial in x alone."""
    return g.compose(AffineMap2(1.0, 0.0, slope, 0.0, 0.0, intercept))


def _integrate_power(m: int, lo: float, hi: float) -> float:
    """Integral of x^m from lo to hi, m possibly negative (0 not in range)."""
    if m == -1:
        return math.log(hi / lo)
    return (hi ** (m + 1) - lo ** (m + 1)) / (m + 1)


def _integrate_univariate(g: Polynomial2, lo: float, hi: float) -> float:
    parts = []
    for (i, j), coeff in g.terms():
        if j != 0:
            raise InternalError("expected a univariate polynomial in x")
        parts.append(coeff * _integrate_power(i, lo, hi))
    return math.fsum(parts)


def parabola_chord_integral(g: Polynomial2, region: ChordRegion) -> float:
    """Integral of g over the region between a parabola arc and its chord.

    In the y = c*x^2 frame the chord of a convex parabola runs above the
    arc, so the region is {a1 <= x <= b1, c*x^2 <= y <= chord(x)} and one
    y-antiderivative plus exact univariate integration finishes the job.
    """
    c = region.conic
    if c.klass is not ConicClass.PARABOLA:
        raise ValueError("parabola_chord_integral needs a parabola region")
    cc = c.params["c"]
    (a1, _), (b1, _) = region.p1, region.p2
    if a1 > b1:
        a1, b1 = b1, a1
    span = max(1.0, abs(a1), abs(b1))
    if b1 - a1 <= CHORD_MIN_SEPARATION * span:
        raise ValueError("degenerate chord: endpoints coincide in x")
    big_g = g.antiderivative_y()
    # chord through (a1, c a1^2) and (b1, c b1^2): y = c(a1+b1)x - c a1 b1
    slope = cc * (a1 + b1)
    intercept = -cc * a1 * b1
    chord_part = _integrate_univariate(
        _poly_on_affine_line(big_g, slope, intercept), a1, b1
    )
    arc_terms: dict[tuple[int, int], float] = {}
    for (i, j), coeff in big_g.terms():
        key = (i + 2 * j, 0)
        arc_terms[key] = arc_terms.get(key, 0.0) + coeff * cc**j
    arc_part = _integrate_univariate(Polynomial2(arc_terms), a1, b1)
    return chord_part - arc_part


def hyperbola_chord_integral(g: Polynomial2, region: ChordRegion) -> float:
    """Integral of g over the region between a hyperbola arc and its chord.

    Works in the asymptote frame where the curve is x*y = k. Both chord
    endpoints must sit on the same branch (same sign of x); the arc y =
    k/x is convex toward the chord exactly when k and x share a sign,
    which fixes the orientation of the iterated integral. Substituting
    y = k/x into the y-antiderivative produces x powers down to x^-1,
    whose integral is the single logarithm in the whole engine.
    """
    c = region.conic
    if c.klass is not ConicClass.HYPERBOLA:
        raise ValueError("hyperbola_chord_integral needs a hyperbola region")
    k = c.params["k"]
    (a1, a2), (b1, b2) = region.p1, region.p2
    if a1 > b1:
        a1, b1 = b1, a1
        a2, b2 = b2, a2
    span = max(1.0, abs(a1), abs(b1))
    if b1 - a1 <= CHORD_MIN_SEPARATION * span:
        raise ValueError("degenerate chord: endpoints coincide in x")
    if a1 * b1 <= 0.0:
        raise ValueError("chord endpoints lie on different hyperbola branches")
    scale = abs(k) + abs(a1 * a2) + abs(b1 * b2)
    if abs(a1 * a2 - k) > 1e-6 * scale or abs(b1 * b2 - k) > 1e-6 * scale:
        raise ValueError("chord endpoints are not on the curve x*y = k")
    big_g = g.antiderivative_y()
    slope = -k / (a1 * b1)
    intercept = k / a1 + k / b1
    chord_part = _integrate_univariate(
        _poly_on_affine_line(big_g, slope, intercept), a1, b1
    )
    arc_parts = []
    for (i, j), coeff in big_g.terms():
        arc_parts.append(coeff * (k**j) * _integrate_power(i - j, a1, b1))
    arc_part = math.fsum(arc_parts)
    signed = chord_part - arc_part
    # chord above arc exactly when the arc is convex there: k/x''... the
    # second derivative of k/x is 2k/x^3, positive iff k*x > 0
    return signed if k * a1 > 0.0 else -signed


# ---------------------------------------------------------------------------
# sign probes


def _sign_probe(c: Conic, t: Triangle, tol: Tolerances | None = None) -> float:
    """Sign of f on the interior of a piece the curve does not enter.

    Probes the centroid first; if that sits too close to the curve, falls
    back to the midpoints of the three cevians (vertex to opposite side's
    midpoint), which cannot all be near a curve that stays out of the
    interior.
    """
    tol = tol or tolerances.active()
    verts = t.vertices
    candidates = [t.centroid]
    for i in range(3):
        opposite = midpoint(verts[(i + 1) % 3], verts[(i + 2) % 3])
        candidates.append(midpoint(verts[i], opposite))
    for p in candidates:
        v = c.value(p)
        scale = c.f.l1_scaled(max(1.0, norm(p)))
        if abs(v) > tol.eps_on * scale:
            return math.copysign(1.0, v)
    raise InternalError(f"no probe point separates {t} from the curve")


def _signed_value(c: Conic, p: Point, tol: Tolerances) -> float | None:
    v = c.value(p)
    scale = c.f.l1_scaled(max(1.0, norm(p)))
    if abs(v) > tol.eps_on * scale:
        return math.copysign(1.0, v)
    return None


# ---------------------------------------------------------------------------
# free-triangle dispatch


def _frame_map(c: Conic) -> AffineMap2:
    """World -> working frame (the circle frame for ellipses)."""
    if c.klass is ConicClass.ELLIPSE:
        a = c.params["a"]
        b = c.params["b"]
        r = math.sqrt(a * b)
        return AffineMap2(r / a, 0.0, 0.0, r / b).compose(c.to_standard)
    return c.to_standard


def _chord_region_integral(g: Polynomial2, c: Conic, region: ChordRegion) -> float:
    if c.klass is ConicClass.ELLIPSE:
        return circle_segment_integral(g, region)
    if c.klass is ConicClass.PARABOLA:
        return parabola_chord_integral(g, region)
    return hyperbola_chord_integral(g, region)


def _chord_case(
    g: Polynomial2,
    c: Conic,
    t: Triangle,
    vi: int,
    vj: int,
    tol: Tolerances,
) -> float:
    """The two-vertices-on-the-curve computation: find out whether the arc
    between them dips into the triangle, and if so split into the chord
    region and its in-triangle complement.

    The dip test and the lens formula cover every reachable geometry: the
    chord is a full side of the triangle, and a strictly convex curve's two
    arcs lie on opposite sides of the chord line, so at most the arc on the
    triangle's side can enter and the curve can never be swallowed whole.
    """
    verts = t.vertices
    pi_, pj = verts[vi], verts[vj]
    vk = 3 - vi - vj
    m = midpoint(pi_, pj)
    hits = [
        h
        for h in conic_segment_intersections(c, (m, verts[vk]), tol)
        if not h.at_vertex
    ]
    if not hits:
        sgn = _sign_probe(c, t, tol)
        return triangle_integral(g, t) if sgn > 0.0 else 0.0

    h = hits[0].point
    frame = _frame_map(c)
    f1, f2, fh = frame(pi_), frame(pj), frame(h)

    if c.klass is ConicClass.HYPERBOLA and f1[0] * f2[0] <= 0.0:
        raise InternalError(
            "median crossing with chord vertices on different branches"
        )

    total = triangle_integral(g, t)
    side = math.copysign(1.0, cross(sub(f2, f1), sub(fh, f1)))
    region = ChordRegion(c, f1, f2, side)
    g_frame = g.compose(frame.inverse())
    lens = _chord_region_integral(g_frame, c, region) / abs(frame.det())

    sgn = _signed_value(c, m, tol)
    if sgn is None:
        sgn = _signed_value(c, midpoint(m, h), tol)
    if sgn is None:
        raise InternalError("could not determine the sign on the chord region")
    return lens if sgn > 0.0 else total - lens


def integrate_free_triangle(
    g: Polynomial2,
    c: Conic,
    t: Triangle,
    status: FreeCase,
    tol: Tolerances | None = None,
) -> float:
    """Integral of g over t intersected with {f >= 0}, t certified free.

    The five configurations of curve points on the boundary (none, one
    touch, one/two/three vertices) each reduce to a constant-sign triangle,
    an ellipse-interior split, or a chord region plus complement.
    """
    tol = tol or tolerances.active()
    if not c.is_nondegenerate():
        raise ValueError("degenerate conics take the polygon route")

    recount = triangle_freedom(c, t, tol)
    if recount.freedom is not Freedom.FREE or recount.case.kind is not status.kind:
        raise InternalError(
            f"free-case status {status.kind} does not match a recount "
            f"({recount.freedom}, {recount.case and recount.case.kind})"
        )

    kind = status.kind
    if kind in (FreeCaseKind.NO_BOUNDARY, FreeCaseKind.ONE_TOUCH, FreeCaseKind.ONE_VERTEX):
        if c.klass is ConicClass.ELLIPSE:
            pos = ellipse_triangle_position(c, t, tol)
            if pos is EllipsePosition.ELLIPSE_INSIDE:
                interior = ellipse_interior_integral(g, c)
                total = triangle_integral(g, t)
                return interior if c.lam < 0.0 else total - interior
        sgn = _sign_probe(c, t, tol)
        return triangle_integral(g, t) if sgn > 0.0 else 0.0

    if kind is FreeCaseKind.TWO_VERTEX:
        on = recount.case.vertex_on
        vi, vj = (i for i in range(3) if on[i])
        return _chord_case(g, c, t, vi, vj, tol)

    if kind is FreeCaseKind.THREE_VERTEX:
        if c.klass is ConicClass.HYPERBOLA:
            frame = c.to_standard
            xs = [frame(v)[0] for v in t.vertices]
            signs = [math.copysign(1.0, x) for x in xs]
            if len(set(signs)) > 1:
                # two vertices share a branch; the third is alone on the
                # other and its arcs cannot enter, so the shared pair's
                # chord machinery decides everything
                lone = signs.index(min(signs, key=signs.count))
                vi, vj = (i for i in range(3) if i != lone)
                return _chord_case(g, c, t, vi, vj, tol)
        # inscribed in a convex curve (or one convex branch): arcs between
        # vertices stay outside, so the sign is constant inside
        sgn = _sign_probe(c, t, tol)
        return triangle_integral(g, t) if sgn > 0.0 else 0.0

    raise InternalError(f"unhandled free case kind {kind}")


# ---------------------------------------------------------------------------
# degenerate conics: polygon clipping


def _clip_halfplane(
    poly: list[Point], hx: float, hy: float, h0: float
) -> list[Point]:
    """Sutherland-Hodgman clip of a convex polygon to hx*x + hy*y + h0 >= 0."""
    if not poly:
        return []
    out: list[Point] = []
    vals = [hx * p[0] + hy * p[1] + h0 for p in poly]
    n = len(poly)
    for i in range(n):
        p, vp = poly[i], vals[i]
        q, vq = poly[(i + 1) % n], vals[(i + 1) % n]
        if vp >= 0.0:
            out.append(p)
        if (vp > 0.0 and vq < 0.0) or (vp < 0.0 and vq > 0.0):
            s = vp / (vp - vq)
            out.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
    return out


def _polygon_integral(g: Polynomial2, poly: list[Point]) -> float:
    """Integral over a convex polygon by fanning from its first vertex."""
    parts = []
    for i in range(1, len(poly) - 1):
        parts.append(signed_triangle_integral(g, poly[0], poly[i], poly[i + 1]))
    return math.fsum(parts)


def _line_functional(m: AffineMap2, which: str) -> tuple[float, float, float]:
    """The frame coordinate (x or y) of an affine map, as a linear form."""
    if which == "x":
        return (m.a, m.b, m.tx)
    return (m.c, m.d, m.ty)


def degenerate_region_polygons(
    c: Conic, t: Triangle, tol: Tolerances | None = None
) -> list[tuple[str, list[Point]]]:
    """The region t & {f >= 0} for a degenerate conic, as labeled convex
    polygons (empty ones dropped). Their union is the region up to measure
    zero, and they never overlap, so summing integrals over them is exact."""
    tol = tol or tolerances.active()
    k = c.klass
    poly = list(t.vertices)

    if k in (ConicClass.EMPTY, ConicClass.POINT):
        sgn = _sign_probe(c, t, tol)
        return [("full-triangle", poly)] if sgn > 0.0 else []
    if k is ConicClass.CONSTANT_SIGN:
        return [("full-triangle", poly)] if c.params["value"] >= 0.0 else []
    if k is ConicClass.DOUBLE_LINE:
        # f = lam * (frame x)^2: one sign everywhere off the line
        return [("full-triangle", poly)] if c.lam > 0.0 else []
    if k is ConicClass.SINGLE_LINE:
        # f itself is the linear functional; clip directly against it
        fx = c.f.coeff(1, 0)
        fy = c.f.coeff(0, 1)
        f0 = c.f.coeff(0, 0)
        pieces = [("halfplane", _clip_halfplane(poly, fx, fy, f0))]
    elif k is ConicClass.PARALLEL_LINES:
        d = c.params["d"]
        ux, uy, u0 = _line_functional(c.to_standard, "x")
        if c.lam < 0.0:
            # f >= 0 between the lines: 0 <= u <= d
            strip = _clip_halfplane(poly, ux, uy, u0)
            strip = _clip_halfplane(strip, -ux, -uy, d - u0)
            pieces = [("strip", strip)]
        else:
            # f >= 0 outside the strip: two disjoint slabs, computed
            # directly rather than as triangle-minus-strip so nothing
            # large cancels
            left = _clip_halfplane(poly, -ux, -uy, -u0)
            right = _clip_halfplane(poly, ux, uy, u0 - d)
            pieces = [("outside-strip", left), ("outside-strip", right)]
    elif k is ConicClass.CROSSING_LINES:
        ux, uy, u0 = _line_functional(c.to_standard, "x")
        vx, vy, v0 = _line_functional(c.to_standard, "y")
        # f = lam * u * v with lam > 0 by construction: f >= 0 where u and
        # v share a sign; lam < 0 would flip to the mixed-sign quadrants
        same = c.lam > 0.0
        quads = (
            [(1.0, 1.0), (-1.0, -1.0)] if same else [(1.0, -1.0), (-1.0, 1.0)]
        )
        pieces = []
        for su, sv in quads:
            piece = _clip_halfplane(poly, su * ux, su * uy, su * u0)
            piece = _clip_halfplane(piece, sv * vx, sv * vy, sv * v0)
            pieces.append(("quadrant", piece))
    else:
        raise ValueError(f"degenerate region asked of nondegenerate class {k.value}")
    return [(label, p) for label, p in pieces if len(p) >= 3]


def degenerate_integral(
    g: Polynomial2, c: Conic, t: Triangle, tol: Tolerances | None = None
) -> float:
    """Integral of g over t & {f >= 0} for conics that are unions of lines
    (or have no curve at all): pure polygon clipping, no subdivision."""
    regions = degenerate_region_polygons(c, t, tol)
    return math.fsum(_polygon_integral(g, poly) for _, poly in regions)
