"""Triangle subdivision into conic-free pieces.

A segment is free when the conic meets it at most at its endpoints, and a
triangle is free when all three sides are free, or when its whole boundary
meets the conic in exactly one non-vertex point (a tangential touch). Free
triangles are what the closed-form integrator consumes: inside one, the
sign of f is constant off the curve, or the curve cuts through vertex
pairs in one of a handful of ways with straight chords available.

decompose() takes a classified nondegenerate conic and cuts a triangle
into at most 11 free pieces:

* no side free: clip each corner with the chord joining the two crossing
  points flanking it, then fan the remaining all-conic-cornered polygon
  from one crossing point. Every new edge joins two points on the conic
  and a chord of a nondegenerate conic is always free, so every piece
  certifies immediately. Piece count is (number of crossings) + 1.
* one side free: clip the corner between the two non-free sides, fan from
  the crossing nearest the free side, and finish with two triangles that
  share one edge running from a triangle vertex to a conic point. That
  shared edge is the only new edge that can be non-free, and it has at
  most one interior crossing (one endpoint already sits on the curve), so
  at most two pieces come out almost-free.
* two sides free (two crossings on the one non-free side): join both
  crossings to the opposite vertex. Each of those two cevians again has
  at most one interior crossing; if both are crossed, one extra chord cut
  separates the clean middle, leaving one free and three almost-free
  pieces whose resolutions total at most eleven overall.

An almost-free triangle (exactly one non-free side, carrying exactly one
crossing D) resolves by case: with no vertex on the curve the crossing is
a tangential touch and the triangle is already free; with the opposite
vertex on the curve the chord through D splits it in two; with an
adjacent vertex on the curve it splits in two when the segment from the
opposite vertex to D is free, and otherwise a tangency point P inside the
triangle (whose tangent keeps the other two vertices on the far side) is
found and joined to all four boundary points for four free pieces.

Every cut is certified after the fact: pieces are re-tested for freedom,
areas must sum back to the original, and every constructed internal edge
is re-checked to be free. Violations raise SubdivisionFailure instead of
silently degrading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from . import tolerances
from .conic import (
    Conic,
    PointLocation,
    SegmentHit,
    conic_segment_intersections,
    point_in_triangle,
    segment_is_free,
    tangency_interior_points,
)
from .errors import DegenerateTriangle, InternalError, SubdivisionFailure
from .geometry import Point, Triangle, cross, dot, norm, sub
from .tolerances import Tolerances

MAX_PIECES = 11
TILING_REL_TOL = 1e-12


class Freedom(Enum):
    FREE = "Free"
    ALMOST_FREE = "AlmostFree"
    NOT_FREE = "NotFree"


class FreeCaseKind(Enum):
    NO_BOUNDARY = "no-boundary"
    ONE_TOUCH = "one-touch"
    ONE_VERTEX = "one-vertex"
    TWO_VERTEX = "two-vertex"
    THREE_VERTEX = "three-vertex"


@dataclass(frozen=True)
class FreeCase:
    kind: FreeCaseKind
    vertex_on: tuple[bool, bool, bool]
    touch: Point | None = None


@dataclass(frozen=True)
class FreeStatus:
    freedom: Freedom
    case: FreeCase | None
    side: int | None
    hit: SegmentHit | None
    side_hits: tuple[tuple[SegmentHit, ...], ...]


@dataclass
class TracePiece:
    triangle: Triangle
    case: FreeCase
    provenance: str
    contribution: float | None = None


@dataclass
class DecompositionTrace:
    original: Triangle
    pieces: list[TracePiece]
    internal_edges: list[tuple[Point, Point]] = field(default_factory=list)


def triangle_freedom(c: Conic, t: Triangle, tol: Tolerances | None = None) -> FreeStatus:
    """Classify t as Free, AlmostFree, or NotFree against the conic."""
    tol = tol or tolerances.active()
    side_hits = tuple(
        tuple(conic_segment_intersections(c, s, tol)) for s in t.sides()
    )
    reach = max(1.0, *(norm(v) for v in t.vertices))
    value_scale = c.f.l1_scaled(reach)
    vertex_on = tuple(
        abs(c.value(v)) <= tol.eps_on * value_scale for v in t.vertices
    )
    interior = [
        [h for h in hits if not h.at_vertex] for hits in side_hits
    ]
    counts = [len(h) for h in interior]
    total = sum(counts)
    if total == 0:
        n_on = sum(vertex_on)
        kind = (
            FreeCaseKind.NO_BOUNDARY,
            FreeCaseKind.ONE_VERTEX,
            FreeCaseKind.TWO_VERTEX,
            FreeCaseKind.THREE_VERTEX,
        )[n_on]
        return FreeStatus(Freedom.FREE, FreeCase(kind, vertex_on), None, None, side_hits)
    if total == 1:
        side = next(i for i in range(3) if counts[i] == 1)
        hit = interior[side][0]
        if hit.multiplicity == 2 and not any(vertex_on):
            case = FreeCase(FreeCaseKind.ONE_TOUCH, vertex_on, hit.point)
            return FreeStatus(Freedom.FREE, case, side, hit, side_hits)
        return FreeStatus(Freedom.ALMOST_FREE, None, side, hit, side_hits)
    return FreeStatus(Freedom.NOT_FREE, None, None, None, side_hits)


def _mk(a: Point, b: Point, c: Point) -> Triangle | None:
    """Triangle or None for (numerically) collinear corners; slivers with
    no area carry no integral and certification re-checks the area sum."""
    try:
        return Triangle(a, b, c)
    except DegenerateTriangle:
        return None


def _interior(side_hits: tuple[tuple[SegmentHit, ...], ...]) -> list[list[SegmentHit]]:
    return [[h for h in hits if not h.at_vertex] for hits in side_hits]


def cut_no_free_sides(
    c: Conic,
    t: Triangle,
    side_hits: tuple[tuple[SegmentHit, ...], ...],
    tol: Tolerances | None = None,
) -> list[Triangle]:
    """All three sides crossed: three corner clips plus a fan.

    first[i]/last[i] are the crossings on side i nearest its start/end
    vertex. Corner clips cut (last[i], vertex_{i+1}, first[i+1]); the
    remaining polygon has every corner on the conic and is fanned from
    first[0].
    """
    interior = _interior(side_hits)
    if any(len(h) == 0 for h in interior):
        raise InternalError("cut_no_free_sides needs a crossing on every side")
    first = [h[0].point for h in interior]
    last = [h[-1].point for h in interior]
    verts = t.vertices
    pieces = [
        _mk(last[i], verts[(i + 1) % 3], first[(i + 1) % 3]) for i in range(3)
    ]
    polygon: list[Point] = []
    for i in range(3):
        polygon.append(first[i])
        if len(interior[i]) > 1:
            polygon.append(last[i])
    apex = polygon[0]
    for j in range(1, len(polygon) - 1):
        pieces.append(_mk(apex, polygon[j], polygon[j + 1]))
    return [p for p in pieces if p is not None]


def cut_one_free_side(
    c: Conic,
    t: Triangle,
    free_side: int,
    side_hits: tuple[tuple[SegmentHit, ...], ...],
    tol: Tolerances | None = None,
) -> list[Triangle]:
    """One free side u-v: clip the corner at w, fan, and close with two
    triangles along the edge v to the last crossing of side w-u (the one
    new edge that may come out non-free)."""
    interior = _interior(side_hits)
    u = t.vertices[free_side]
    v = t.vertices[(free_side + 1) % 3]
    w = t.vertices[(free_side + 2) % 3]
    vs = [h.point for h in interior[(free_side + 1) % 3]]  # along v -> w
    ws = [h.point for h in interior[(free_side + 2) % 3]]  # along w -> u
    if not vs or not ws:
        raise InternalError("cut_one_free_side needs crossings on both other sides")
    pieces = [_mk(vs[-1], w, ws[0])]
    chain = vs[1:] + ws
    apex = vs[0]
    for j in range(len(chain) - 1):
        pieces.append(_mk(apex, chain[j], chain[j + 1]))
    pieces.append(_mk(v, vs[0], ws[-1]))
    pieces.append(_mk(u, v, ws[-1]))
    return [p for p in pieces if p is not None]


def cut_two_free_sides(
    c: Conic,
    t: Triangle,
    bad_side: int,
    side_hits: tuple[tuple[SegmentHit, ...], ...],
    tol: Tolerances | None = None,
) -> list[Triangle]:
    """Two free sides: the non-free side u-v carries two crossings P1, P2
    which are joined to the opposite vertex w. When both new cevians are
    themselves crossed, one extra chord from the second cevian's crossing
    back to P1 isolates a clean middle triangle."""
    tol = tol or tolerances.active()
    interior = _interior(side_hits)
    hits = interior[bad_side]
    if len(hits) != 2:
        raise InternalError("cut_two_free_sides needs exactly two crossings")
    u = t.vertices[bad_side]
    v = t.vertices[(bad_side + 1) % 3]
    w = t.vertices[(bad_side + 2) % 3]
    p1, p2 = hits[0].point, hits[1].point
    cev1 = [h for h in conic_segment_intersections(c, (p1, w), tol) if not h.at_vertex]
    cev2 = [h for h in conic_segment_intersections(c, (p2, w), tol) if not h.at_vertex]
    if not cev1 and not cev2:
        pieces = [_mk(u, p1, w), _mk(p1, p2, w), _mk(p2, v, w)]
    elif cev1 and cev2:
        x1 = cev2[0].point
        pieces = [
            _mk(u, p1, w),
            _mk(p1, p2, x1),
            _mk(p1, x1, w),
            _mk(p2, v, w),
        ]
    else:
        # exactly one cevian crossed; no extra cut needed, the two pieces
        # sharing it resolve as almost-free
        pieces = [_mk(u, p1, w), _mk(p1, p2, w), _mk(p2, v, w)]
    return [p for p in pieces if p is not None]


def resolve_almost_free(
    c: Conic,
    t: Triangle,
    hit: SegmentHit,
    side: int | None = None,
    tol: Tolerances | None = None,
) -> list[Triangle]:
    """Split an almost-free triangle into at most 4 free pieces.

    The non-free side carries the single crossing D = hit.point. Returns
    [t] unchanged when no vertex lies on the curve (the contact is then a
    tangential touch and t is already free). Raises SubdivisionFailure
    when no tangency construction yields a certified cut.
    """
    tol = tol or tolerances.active()
    if side is None:
        side = _closest_side(t, hit.point)
    d = hit.point
    a = t.vertices[side]
    b = t.vertices[(side + 1) % 3]
    cv = t.vertices[(side + 2) % 3]
    reach = max(1.0, *(norm(v) for v in t.vertices))
    value_scale = c.f.l1_scaled(reach)

    def on_curve(p: Point) -> bool:
        return abs(c.value(p)) <= tol.eps_on * value_scale

    if not (on_curve(a) or on_curve(b) or on_curve(cv)):
        return [t]
    if on_curve(cv):
        # opposite vertex on the curve: the chord cv-d splits t in two
        pieces = [_mk(a, d, cv), _mk(d, b, cv)]
        return [p for p in pieces if p is not None]
    # adjacent case: relabel so the on-curve endpoint of the bad side is A
    if on_curve(b):
        a, b = b, a
    if segment_is_free(c, (cv, d), tol):
        pieces = [_mk(a, d, cv), _mk(d, b, cv)]
        return [p for p in pieces if p is not None]
    for p in tangency_interior_points(c, a, b, cv, tol):
        if point_in_triangle(p, t, tol) is not PointLocation.INSIDE:
            continue
        if not segment_is_free(c, (b, p), tol):
            continue
        if not segment_is_free(c, (cv, p), tol):
            continue
        pieces = [_mk(a, d, p), _mk(d, b, p), _mk(b, cv, p), _mk(cv, a, p)]
        return [q for q in pieces if q is not None]
    raise SubdivisionFailure(
        f"no tangency cut certified for almost-free triangle {t!r} (crossing at {d})"
    )


def _closest_side(t: Triangle, p: Point) -> int:
    best, best_d = 0, math.inf
    for i, (s0, s1) in enumerate(t.sides()):
        seg = sub(s1, s0)
        L2 = dot(seg, seg)
        proj = max(0.0, min(1.0, dot(sub(p, s0), seg) / L2))
        foot = (s0[0] + proj * seg[0], s0[1] + proj * seg[1])
        dist = norm(sub(p, foot))
        if dist < best_d:
            best, best_d = i, dist
    return best


def decompose(c: Conic, t: Triangle, tol: Tolerances | None = None) -> DecompositionTrace:
    """Cut t into certified free pieces against the nondegenerate conic c."""
    tol = tol or tolerances.active()
    pieces: list[TracePiece] = []

    def emit(tri: Triangle, case: FreeCase, provenance: str) -> None:
        pieces.append(TracePiece(tri, case, provenance))

    def handle(tri: Triangle, provenance: str, depth: int) -> None:
        status = triangle_freedom(c, tri, tol)
        if status.freedom is Freedom.FREE:
            emit(tri, status.case, provenance)
            return
        if status.freedom is Freedom.ALMOST_FREE:
            subs = resolve_almost_free(c, tri, status.hit, status.side, tol)
            if len(subs) == 1 and subs[0] is tri:
                # no vertex on the curve: the single crossing is a touch
                case = FreeCase(FreeCaseKind.ONE_TOUCH, (False, False, False), status.hit.point)
                emit(tri, case, provenance)
                return
            label = "vertex-split" if len(subs) <= 2 else "tangent-split"
            for sub_tri in subs:
                sub_status = triangle_freedom(c, sub_tri, tol)
                if sub_status.freedom is not Freedom.FREE:
                    raise SubdivisionFailure(
                        f"piece {sub_tri!r} from an almost-free split failed to certify"
                    )
                emit(sub_tri, sub_status.case, label)
            return
        if depth > 0:
            raise SubdivisionFailure(
                f"piece {tri!r} is not free after cutting; the construction "
                "promised otherwise"
            )
        interior = _interior(status.side_hits)
        free_sides = [i for i in range(3) if not interior[i]]
        if len(free_sides) == 0:
            subs = cut_no_free_sides(c, tri, status.side_hits, tol)
            label = "all-sides-cut"
        elif len(free_sides) == 1:
            subs = cut_one_free_side(c, tri, free_sides[0], status.side_hits, tol)
            label = "one-free-side-cut"
        elif len(free_sides) == 2:
            bad = next(i for i in range(3) if interior[i])
            subs = cut_two_free_sides(c, tri, bad, status.side_hits, tol)
            label = "two-free-sides-cut"
        else:
            raise InternalError("NotFree with three free sides")
        for sub_tri in subs:
            handle(sub_tri, label, depth + 1)

    handle(t, "whole", 0)

    trace = DecompositionTrace(t, pieces)
    trace.internal_edges = _collect_internal_edges(trace)
    _certify(c, trace, tol)
    return trace


def _collect_internal_edges(trace: DecompositionTrace) -> list[tuple[Point, Point]]:
    """Piece edges that are not contained in the original boundary."""
    orig = trace.original
    edges: dict[tuple, tuple[Point, Point]] = {}
    for piece in trace.pieces:
        for e0, e1 in piece.triangle.sides():
            if _on_original_boundary(orig, e0, e1):
                continue
            key = tuple(sorted((_round_pt(e0), _round_pt(e1))))
            edges.setdefault(key, (e0, e1))
    return list(edges.values())


def _round_pt(p: Point) -> tuple[float, float]:
    return (round(p[0], 9), round(p[1], 9))


def _on_original_boundary(t: Triangle, e0: Point, e1: Point) -> bool:
    for s0, s1 in t.sides():
        d = sub(s1, s0)
        L2 = dot(d, d)
        ok = True
        for p in (e0, e1):
            off = abs(cross(d, sub(p, s0))) / L2
            along = dot(sub(p, s0), d) / L2
            if off > 1e-9 or along < -1e-9 or along > 1.0 + 1e-9:
                ok = False
                break
        if ok:
            return True
    return False


def _certify(c: Conic, trace: DecompositionTrace, tol: Tolerances) -> None:
    if len(trace.pieces) > MAX_PIECES:
        raise SubdivisionFailure(
            f"{len(trace.pieces)} pieces exceed the guaranteed bound of {MAX_PIECES}"
        )
    total = math.fsum(p.triangle.area for p in trace.pieces)
    want = trace.original.area
    if abs(total - want) > TILING_REL_TOL * max(want, 1e-300):
        raise SubdivisionFailure(
            f"pieces tile {total!r} of an original area {want!r}"
        )
    for e0, e1 in trace.internal_edges:
        if not segment_is_free(c, (e0, e1), tol):
            raise SubdivisionFailure(
                f"constructed internal edge {(e0, e1)} is not free"
            )
