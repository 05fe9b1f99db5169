"""Conic classification, normalization, and intersection predicates.

A quadratic f(x, y) = a20 x^2 + a11 xy + a02 y^2 + a10 x + a01 y + a00 is
sorted into one of ten classes using the sign pattern of two determinant
invariants: delta, the determinant of the quadratic-part matrix

    M2 = [[a20, a11/2], [a11/2, a02]],

and Delta, the determinant of the full 3x3 matrix M3 that also carries the
linear and constant coefficients. Both comparisons are made relative to the
coefficient magnitudes with eps_class, and borderline cases fall toward the
degenerate classes on purpose: the degenerate integrator is exact and never
needs subdivision, so a razor-thin ellipse misread as a line pair costs an
error on the order of the threshold rather than a wrong branch.

normalize_conic additionally produces a map to a standard member of each
family, chosen so that no large scale factors are introduced:

    ellipse          x^2/a^2 + y^2/b^2 - 1     (rigid map, a >= b > 0)
    parabola         y - c x^2, c > 0          (rigid map)
    hyperbola        x y - k, k != 0           (asymptote frame: affine with
                                                unit-normal rows, det bounded)
    crossing lines   x y                       (same frame as hyperbola)
    parallel lines   x (x - d), d > 0          (rigid map)
    double line      x^2                       (rigid map)
    single line      x                         (rigid map)

The proportionality factor lam with f = lam * (standard form) o to_standard
is stored so callers can recover the sign of f on each side of the curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import tolerances
from .errors import InternalError, NoTangencyCandidate
from .geometry import (
    AffineMap2,
    Point,
    Triangle,
    add,
    cross,
    dot,
    lerp,
    norm,
    rot90,
    scale,
    sub,
    unit,
)
from .poly import Polynomial2
from .tolerances import Tolerances

# |A| below this times the coefficient scale means the restriction of f to a
# line is effectively linear, not quadratic.
LINEAR_FALLBACK_EPS = 1e-14
DISCRIMINANT_REL_EPS = 1e-12


class ConicClass(str, Enum):
    ELLIPSE = "Ellipse"
    PARABOLA = "Parabola"
    HYPERBOLA = "Hyperbola"
    CROSSING_LINES = "CrossingLines"
    PARALLEL_LINES = "ParallelLines"
    DOUBLE_LINE = "DoubleLine"
    SINGLE_LINE = "SingleLine"
    POINT = "Point"
    EMPTY = "Empty"
    CONSTANT_SIGN = "ConstantSign"


NONDEGENERATE_CLASSES = frozenset(
    {ConicClass.ELLIPSE, ConicClass.PARABOLA, ConicClass.HYPERBOLA}
)


class PointLocation(Enum):
    INSIDE = "Inside"
    BORDER = "Border"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class SegmentHit:
    """One intersection of a conic with a parameterized segment."""

    point: Point
    param: float
    multiplicity: int
    at_vertex: bool


@dataclass(frozen=True)
class Conic:
    """A classified quadratic together with its normalization data.

    to_standard maps world coordinates into the frame where the curve is
    the standard family member; it is None for Empty, Point and
    ConstantSign, which have no curve to normalize. margins records how far
    each classification decision sat from its threshold (ratio of the
    tested quantity to the threshold; values near 1 mean a close call).
    """

    f: Polynomial2
    klass: ConicClass
    to_standard: AffineMap2 | None
    lam: float
    params: dict
    margins: dict

    def value(self, p: Point) -> float:
        return self.f(p[0], p[1])

    def gradient(self, p: Point) -> Point:
        a20, a11, a02, a10, a01, _ = coeffs6(self.f)
        x, y = p
        return (2.0 * a20 * x + a11 * y + a10, a11 * x + 2.0 * a02 * y + a01)

    def quad_form(self, d: Point) -> float:
        """The pure quadratic part evaluated on a direction vector."""
        a20, a11, a02 = coeffs6(self.f)[:3]
        return a20 * d[0] * d[0] + a11 * d[0] * d[1] + a02 * d[1] * d[1]

    def standard_poly(self) -> Polynomial2 | None:
        k = self.klass
        if k is ConicClass.ELLIPSE:
            a, b = self.params["a"], self.params["b"]
            return Polynomial2({(2, 0): 1.0 / (a * a), (0, 2): 1.0 / (b * b), (0, 0): -1.0})
        if k is ConicClass.PARABOLA:
            return Polynomial2({(0, 1): 1.0, (2, 0): -self.params["c"]})
        if k is ConicClass.HYPERBOLA:
            return Polynomial2({(1, 1): 1.0, (0, 0): -self.params["k"]})
        if k is ConicClass.CROSSING_LINES:
            return Polynomial2({(1, 1): 1.0})
        if k is ConicClass.PARALLEL_LINES:
            return Polynomial2({(2, 0): 1.0, (1, 0): -self.params["d"]})
        if k is ConicClass.DOUBLE_LINE:
            return Polynomial2({(2, 0): 1.0})
        if k is ConicClass.SINGLE_LINE:
            return Polynomial2({(1, 0): 1.0})
        return None

    def is_nondegenerate(self) -> bool:
        return self.klass in NONDEGENERATE_CLASSES


def coeffs6(f: Polynomial2) -> tuple[float, float, float, float, float, float]:
    """(a20, a11, a02, a10, a01, a00) of a degree <= 2 polynomial."""
    return (
        f.coeff(2, 0),
        f.coeff(1, 1),
        f.coeff(0, 2),
        f.coeff(1, 0),
        f.coeff(0, 1),
        f.coeff(0, 0),
    )


def _det3(a20: float, a11: float, a02: float, a10: float, a01: float, a00: float) -> float:
    """Determinant of the full conic matrix M3."""
    b, d, e = a11 / 2.0, a10 / 2.0, a01 / 2.0
    return (
        a20 * (a02 * a00 - e * e)
        - b * (b * a00 - e * d)
        + d * (b * e - a02 * d)
    )


def _sym_eig(p: float, q: float, r: float) -> tuple[float, Point, float, Point]:
    """Eigen decomposition of the symmetric matrix [[p, q], [q, r]].

    Returns (l1, v1, l2, v2) with |l1| <= |l2|, unit eigenvectors, and
    v2 = rot90(v1) so the pair is a right-handed orthonormal frame.
    """
    theta = 0.5 * math.atan2(2.0 * q, p - r)
    c, s = math.cos(theta), math.sin(theta)
    la = p * c * c + 2.0 * q * c * s + r * s * s
    lb = p * s * s - 2.0 * q * c * s + r * c * c
    if abs(la) <= abs(lb):
        l1, v1, l2 = la, (c, s), lb
    else:
        l1, v1, l2 = lb, (-s, c), la
    return l1, v1, l2, rot90(v1)


def conic_classify(f: Polynomial2, tol: Tolerances | None = None) -> ConicClass:
    return normalize_conic(f, tol).klass


def normalize_conic(f: Polynomial2, tol: Tolerances | None = None) -> Conic:
    tol = tol or tolerances.active()
    eps = tol.eps_class
    a20, a11, a02, a10, a01, a00 = coeffs6(f)
    margins: dict[str, float] = {}

    s_all = max(abs(a20), abs(a11), abs(a02), abs(a10), abs(a01), abs(a00))
    if s_all == 0.0:
        return Conic(f, ConicClass.CONSTANT_SIGN, None, 0.0, {"value": 0.0}, margins)

    s2 = max(abs(a20), abs(a11), abs(a02))
    margins["quadratic_part"] = s2 / (eps * s_all)
    if s2 <= eps * s_all:
        slin = max(abs(a10), abs(a01))
        margins["linear_part"] = slin / (eps * s_all)
        if slin <= eps * s_all:
            return Conic(f, ConicClass.CONSTANT_SIGN, None, a00, {"value": a00}, margins)
        lam = math.hypot(a10, a01)
        n = (a10 / lam, a01 / lam)
        m = AffineMap2.from_rows(n, rot90(n), (a00 / lam, 0.0))
        return Conic(f, ConicClass.SINGLE_LINE, m, lam, {}, margins)

    p, q, r = a20, a11 / 2.0, a02
    lin = (a10, a01)
    delta = p * r - q * q
    det3 = _det3(a20, a11, a02, a10, a01, a00)
    m3 = max(abs(p), abs(q), abs(r), abs(a10) / 2.0, abs(a01) / 2.0, abs(a00))
    margins["det3"] = abs(det3) / (eps * m3 ** 3)
    margins["minor"] = abs(delta) / (eps * s2 * s2)
    degenerate = abs(det3) <= eps * m3 ** 3
    parabolic = abs(delta) <= eps * s2 * s2

    l1, v1, l2, v2 = _sym_eig(p, q, r)

    def center() -> Point:
        # solve M2 c = -lin/2; delta != 0 on the paths that call this
        return (
            -(r * a10 - q * a01) / (2.0 * delta),
            -(p * a01 - q * a10) / (2.0 * delta),
        )

    def rotated_linear() -> tuple[Point, Point, float, float]:
        """Frame (vm, w0) with vm the dominant eigenvector, right-handed,
        plus the linear coefficients (bu, beta) of f in that frame."""
        vm = v2
        w0 = rot90(vm)
        return vm, w0, dot(lin, vm), dot(lin, w0)

    if not degenerate:
        if parabolic:
            vm, w0, bu, beta = rotated_linear()
            lam_m = l2
            if beta == 0.0:
                raise InternalError("nondegenerate parabola with no axis term")
            u0 = -bu / (2.0 * lam_m)
            const1 = a00 - lam_m * u0 * u0
            w0c = -const1 / beta
            cpar = -lam_m / beta
            lam = beta
            m = AffineMap2.from_rows(vm, w0, (-u0, -w0c))
            if cpar <= 0.0:
                m = AffineMap2.rotation(math.pi).compose(m)
                cpar = lam_m / beta
                lam = -beta
            return Conic(f, ConicClass.PARABOLA, m, lam, {"c": cpar}, margins)
        if delta > 0.0:
            cen = center()
            k0 = f(cen[0], cen[1])
            if det3 * (p + r) > 0.0:
                return Conic(f, ConicClass.EMPTY, None, 0.0, {}, margins)
            a2 = -k0 / l1
            b2 = -k0 / l2
            if a2 <= 0.0 or b2 <= 0.0:
                raise InternalError("real ellipse with non-positive axis squares")
            m = AffineMap2.from_rows(v1, v2, (-dot(v1, cen), -dot(v2, cen)))
            params = {"a": math.sqrt(a2), "b": math.sqrt(b2), "center": cen}
            return Conic(f, ConicClass.ELLIPSE, m, -k0, params, margins)
        # delta < 0: hyperbola, asymptote frame
        cen = center()
        k0 = f(cen[0], cen[1])
        conic_hyp = _asymptote_frame(f, cen, l1, v1, l2, v2)
        n1, n2, lam = conic_hyp
        k = -k0 / lam
        m = AffineMap2.from_rows(n1, n2, (-dot(n1, cen), -dot(n2, cen)))
        e1, e2 = rot90(n1), rot90(n2)
        params = {"k": k, "center": cen, "dir1": e1, "dir2": e2}
        return Conic(f, ConicClass.HYPERBOLA, m, lam, params, margins)

    # degenerate side
    if parabolic:
        vm, w0, bu, beta = rotated_linear()
        lam_m = l2
        disc = bu * bu - 4.0 * lam_m * a00
        disc_scale = max(bu * bu, abs(4.0 * lam_m * a00))
        if disc_scale == 0.0:
            disc_scale = lam_m * lam_m
        margins["parallel_disc"] = abs(disc) / (eps * disc_scale)
        if abs(disc) <= eps * disc_scale:
            root = -bu / (2.0 * lam_m)
            m = AffineMap2.from_rows(vm, w0, (-root, 0.0))
            return Conic(f, ConicClass.DOUBLE_LINE, m, lam_m, {}, margins)
        if disc < 0.0:
            return Conic(f, ConicClass.EMPTY, None, 0.0, {}, margins)
        sq = math.sqrt(disc)
        qq = -0.5 * (bu + math.copysign(sq, bu)) if bu != 0.0 else -0.5 * sq
        r1, r2 = qq / lam_m, a00 / qq
        if r1 > r2:
            r1, r2 = r2, r1
        m = AffineMap2.from_rows(vm, w0, (-r1, 0.0))
        return Conic(f, ConicClass.PARALLEL_LINES, m, lam_m, {"d": r2 - r1}, margins)
    if delta > 0.0:
        cen = center()
        return Conic(f, ConicClass.POINT, None, 0.0, {"center": cen}, margins)
    # delta < 0, det3 ~ 0: two crossing lines through the center
    cen = center()
    n1, n2, lam = _asymptote_frame(f, cen, l1, v1, l2, v2)
    m = AffineMap2.from_rows(n1, n2, (-dot(n1, cen), -dot(n2, cen)))
    e1, e2 = rot90(n1), rot90(n2)
    params = {"center": cen, "dir1": e1, "dir2": e2}
    return Conic(f, ConicClass.CROSSING_LINES, m, lam, params, margins)


def _asymptote_frame(
    f: Polynomial2, cen: Point, l1: float, v1: Point, l2: float, v2: Point
) -> tuple[Point, Point, float]:
    """Unit normals (n1, n2) of the two asymptote directions and lam > 0
    with quadratic_part(x) = lam * (n1 . x)(n2 . x)."""
    # null directions of l1 u^2 + l2 v^2 in the eigenbasis: v = +-ratio u
    ratio = math.sqrt(-l1 / l2)
    e1 = unit(add(v1, scale(v2, ratio)))
    e2 = unit(sub(v1, scale(v2, ratio)))
    n1, n2 = rot90(e1), rot90(e2)
    a20, a11, a02 = coeffs6(f)[:3]

    def qf(w: Point) -> float:
        return a20 * w[0] * w[0] + a11 * w[0] * w[1] + a02 * w[1] * w[1]

    best, lam = 0.0, 0.0
    for w in (v1, v2, unit(add(v1, v2))):
        den = dot(n1, w) * dot(n2, w)
        if abs(den) > abs(best):
            best = den
            lam = qf(w) / den
    if lam == 0.0:
        raise InternalError("could not match the asymptote frame scale")
    if lam < 0.0:
        n1 = (-n1[0], -n1[1])
        lam = -lam
    return n1, n2, lam


def _restricted_quadratic(f: Polynomial2, p0: Point, d: Point) -> tuple[float, float, float]:
    """Coefficients (A, B, C) of t -> f(p0 + t d)."""
    a20, a11, a02, a10, a01, a00 = coeffs6(f)
    x, y = p0
    dx, dy = d
    A = a20 * dx * dx + a11 * dx * dy + a02 * dy * dy
    B = (2.0 * a20 * x + a11 * y + a10) * dx + (a11 * x + 2.0 * a02 * y + a01) * dy
    C = f(x, y)
    return A, B, C


def _stable_quadratic_roots(A: float, B: float, C: float, eps_t: float) -> list[tuple[float, int]]:
    """Roots of A t^2 + B t + C with multiplicity, cancellation-free.

    Roots closer than eps_t (discriminant below (eps_t A)^2) collapse into
    one double root; a slightly negative discriminant in that window is
    treated as a tangency rather than a miss. The window also carries a
    relative term: B^2 - 4AC is computed with absolute error of order
    machine epsilon times max(B^2, |4AC|), so an exact tangency (think of
    an inscribed circle) often lands at a discriminant of that size rather
    than near zero. Collapsing roots below the relative window loses only
    a sliver whose width in t is about 1e-6, far below any reported
    accuracy, and keeps the geometry consistent.
    """
    D = B * B - 4.0 * A * C
    window = max((eps_t * A) ** 2, DISCRIMINANT_REL_EPS * max(B * B, abs(4.0 * A * C)))
    if D < -window:
        return []
    if D <= window:
        return [(-B / (2.0 * A), 2)]
    sq = math.sqrt(D)
    qq = -0.5 * (B + math.copysign(sq, B)) if B != 0.0 else -0.5 * sq
    roots = [(qq / A, 1)]
    if qq != 0.0:
        roots.append((C / qq, 1))
    else:
        roots.append((0.0, 1))
    return roots


def conic_segment_intersections(
    c: Conic | Polynomial2,
    seg: tuple[Point, Point],
    tol: Tolerances | None = None,
) -> list[SegmentHit]:
    """All intersections of the conic with the closed segment, sorted by
    the segment parameter.

    Roots within eps_t of each other merge into a single multiplicity-2
    hit; roots within eps_t of an endpoint snap onto it and are flagged
    at_vertex. When an endpoint lies on the curve (within eps_on of zero,
    relative to the coefficient scale) its root is taken as exactly 0 or 1
    and the quadratic is deflated, because a double root at an endpoint
    (tangency at a vertex, common for constructed cut segments) is
    otherwise split by rounding into two spurious near-vertex roots. A
    segment lying entirely inside the curve's zero set (only possible for
    degenerate conics) reports no hits; callers route degenerate classes
    elsewhere.
    """
    tol = tol or tolerances.active()
    f = c.f if isinstance(c, Conic) else c
    p0, p1 = seg
    d = sub(p1, p0)
    A, B, C = _restricted_quadratic(f, p0, d)

    a20, a11, a02 = coeffs6(f)[:3]
    quad_scale = (abs(a20) + abs(a11) + abs(a02)) * dot(d, d)
    linear = abs(A) <= LINEAR_FALLBACK_EPS * quad_scale
    value_scale = f.l1_scaled(max(1.0, norm(p0), norm(p1)))
    on0 = abs(f(*p0)) <= tol.eps_on * value_scale
    on1 = abs(f(*p1)) <= tol.eps_on * value_scale

    raw: list[tuple[float, int]]
    if on0 and on1:
        # a chord; for a nondegenerate conic the only roots are the
        # endpoints themselves (a degenerate f containing the whole line
        # is the caller's problem, reported as hit-free)
        raw = [] if linear else [(0.0, 1), (1.0, 1)]
    elif on0:
        raw = [(0.0, 1)]
        if not linear:
            raw.append((-B / A, 1))  # root sum with the known root at 0
    elif on1:
        raw = [(1.0, 1)]
        if not linear:
            raw.append((C / A, 1))  # root product with the known root at 1
    elif linear:
        lin_scale = abs(B) + abs(C)
        if lin_scale == 0.0 or abs(B) <= LINEAR_FALLBACK_EPS * lin_scale:
            raw = []
        else:
            raw = [(-C / B, 1)]
    else:
        raw = _stable_quadratic_roots(A, B, C, tol.eps_t)
        # one Newton step sharpens transversal roots; skip when the slope
        # is flat (tangency) where the step would be unstable
        polished = []
        for t, mult in raw:
            slope = 2.0 * A * t + B
            if mult == 1 and slope != 0.0:
                corr = ((A * t + B) * t + C) / slope
                if abs(corr) <= 1e-6:
                    t = t - corr
            polished.append((t, mult))
        raw = polished

    hits: list[SegmentHit] = []
    for t, mult in raw:
        if t < -tol.eps_t or t > 1.0 + tol.eps_t:
            continue
        if abs(t) <= tol.eps_t:
            hits.append(SegmentHit(p0, 0.0, mult, True))
        elif abs(t - 1.0) <= tol.eps_t:
            hits.append(SegmentHit(p1, 1.0, mult, True))
        else:
            hits.append(SegmentHit(lerp(p0, p1, t), t, mult, False))

    hits.sort(key=lambda h: h.param)
    if len(hits) == 2 and hits[1].param - hits[0].param <= tol.eps_t:
        a, b = hits
        keep = a if a.at_vertex or not b.at_vertex else b
        hits = [SegmentHit(keep.point, keep.param, 2, keep.at_vertex)]
    return hits


def segment_is_free(
    c: Conic | Polynomial2,
    seg: tuple[Point, Point],
    tol: Tolerances | None = None,
) -> bool:
    """True when the conic meets the segment at most at its endpoints."""
    return all(h.at_vertex for h in conic_segment_intersections(c, seg, tol))


def point_in_triangle(
    p: Point, t: Triangle, tol: Tolerances | None = None
) -> PointLocation:
    """Barycentric location test with an eps_b border band.

    Writing P = A + alpha AB + beta AC, the point is Inside when alpha,
    beta and 1 - alpha - beta are all positive by more than eps_b, Border
    when it sits within eps_b of one of the edge conditions, and Outside
    otherwise.
    """
    tol = tol or tolerances.active()
    eps = tol.eps_b
    ab = sub(t.b, t.a)
    ac = sub(t.c, t.a)
    ap = sub(p, t.a)
    den = cross(ab, ac)
    alpha = cross(ap, ac) / den
    beta = cross(ab, ap) / den
    ssum = alpha + beta
    if alpha > eps and beta > eps and ssum < 1.0 - eps:
        return PointLocation.INSIDE

    def in_range(x: float) -> bool:
        return -eps <= x <= 1.0 + eps

    if (
        (abs(ssum - 1.0) <= eps and in_range(alpha))
        or (abs(alpha) <= eps and in_range(beta))
        or (abs(beta) <= eps and in_range(alpha))
    ):
        return PointLocation.BORDER
    return PointLocation.OUTSIDE


def _line_conic_points(
    f: Polynomial2, x0: Point, w: Point, tol: Tolerances
) -> list[Point]:
    """Intersections of the full line x0 + s w with the conic."""
    A, B, C = _restricted_quadratic(f, x0, w)
    a20, a11, a02 = coeffs6(f)[:3]
    quad_scale = (abs(a20) + abs(a11) + abs(a02)) * dot(w, w)
    if abs(A) <= LINEAR_FALLBACK_EPS * quad_scale:
        if B == 0.0:
            return []
        return [add(x0, scale(w, -C / B))]
    return [add(x0, scale(w, s)) for s, _ in _stable_quadratic_roots(A, B, C, tol.eps_t)]


def _polish_onto_conic(c: Conic, p: Point) -> Point:
    for _ in range(2):
        g = c.gradient(p)
        g2 = dot(g, g)
        if g2 == 0.0:
            break
        p = sub(p, scale(g, c.value(p) / g2))
    return p


def tangency_interior_points(
    c: Conic,
    branch_hint: Point,
    b: Point,
    cpt: Point,
    tol: Tolerances | None = None,
) -> list[Point]:
    """Candidate points P on the conic whose tangent line keeps b and cpt
    on the side away from the curve.

    Three constructions are tried in order: the point where the tangent is
    parallel to segment b-cpt, then the tangency points of the tangents
    through b (its polar line cut with the conic), then the same for cpt.
    Touching the tangent line itself is allowed for b or cpt (that is
    exactly the pole case: the segment then runs along the tangent, which
    meets the curve only at P). On a hyperbola, candidates must sit on the
    same branch as branch_hint. Raises NoTangencyCandidate when nothing
    survives.
    """
    tol = tol or tolerances.active()
    f = c.f
    a20, a11, a02, a10, a01, a00 = coeffs6(f)
    lin = (a10, a01)

    def m2_apply(v: Point) -> Point:
        return (a20 * v[0] + a11 / 2.0 * v[1], a11 / 2.0 * v[0] + a02 * v[1])

    lines: list[tuple[Point, float]] = []
    d = sub(cpt, b)
    lines.append((scale(m2_apply(d), 2.0), dot(lin, d)))       # tangent parallel to b-cpt
    for pole in (b, cpt):                                      # polar lines
        lines.append((add(m2_apply(pole), scale(lin, 0.5)), dot(lin, pole) / 2.0 + a00))

    branch_sign = 0.0
    if c.klass is ConicClass.HYPERBOLA and c.to_standard is not None:
        branch_sign = math.copysign(1.0, c.to_standard(branch_hint)[0])

    out: list[Point] = []
    for n, c0 in lines:
        n2 = dot(n, n)
        if n2 == 0.0:
            continue
        x0 = scale(n, -c0 / n2)
        w = unit(rot90(n))
        for pt in _line_conic_points(f, x0, w, tol):
            pt = _polish_onto_conic(c, pt)
            span = max(1.0, norm(pt))
            if abs(c.value(pt)) > tol.eps_on * f.l1_scaled(span):
                continue
            if branch_sign != 0.0 and c.to_standard(pt)[0] * branch_sign <= 0.0:
                continue
            g = c.gradient(pt)
            tau = rot90(g)
            qtt = c.quad_form(tau)
            if qtt == 0.0:
                continue
            sgn = math.copysign(1.0, qtt)
            vb, vc = dot(g, sub(b, pt)), dot(g, sub(cpt, pt))
            sb = norm(g) * norm(sub(b, pt))
            sc = norm(g) * norm(sub(cpt, pt))
            if sgn * vb < -tol.eps_on * sb or sgn * vc < -tol.eps_on * sc:
                continue
            if not (sgn * vb > tol.eps_on * sb or sgn * vc > tol.eps_on * sc):
                continue
            if any(norm(sub(pt, prev)) <= 1e-9 * (1.0 + norm(pt)) for prev in out):
                continue
            out.append(pt)
    if not out:
        raise NoTangencyCandidate(
            f"no tangency candidate separates {b} and {cpt} near {branch_hint}"
        )
    return out
