"""Subdivision into free triangles: freedom classification, the three cut
constructions, almost-free resolution, and full decompose certification."""

from __future__ import annotations

import math
import random

import pytest

from conicquad.conic import (
    PointLocation,
    normalize_conic,
    point_in_triangle,
    segment_is_free,
)
from conicquad.errors import SubdivisionFailure
from conicquad.geometry import Triangle
from conicquad.poly import Polynomial2
from conicquad.random_instances import NONDEGENERATE, random_instance
from conicquad.subdivide import (
    FreeCaseKind,
    Freedom,
    cut_no_free_sides,
    cut_two_free_sides,
    decompose,
    resolve_almost_free,
    triangle_freedom,
)


def P2(**kw) -> Polynomial2:
    key = {"x2": (2, 0), "xy": (1, 1), "y2": (0, 2), "x": (1, 0), "y": (0, 1), "c": (0, 0)}
    return Polynomial2({key[k]: float(v) for k, v in kw.items()})


UNIT_CIRCLE = normalize_conic(P2(x2=1, y2=1, c=-1))


class TestTriangleFreedom:
    def test_far_triangle_is_free_no_boundary(self):
        st = triangle_freedom(UNIT_CIRCLE, Triangle((2, 0), (3, 0), (2, 1)))
        assert st.freedom is Freedom.FREE
        assert st.case.kind is FreeCaseKind.NO_BOUNDARY
        assert st.case.vertex_on == (False, False, False)

    def test_one_vertex_on_curve(self):
        st = triangle_freedom(UNIT_CIRCLE, Triangle((1, 0), (3, -1), (3, 1)))
        assert st.freedom is Freedom.FREE
        assert st.case.kind is FreeCaseKind.ONE_VERTEX
        assert sum(st.case.vertex_on) == 1

    def test_double_crossing_side_is_not_free(self):
        st = triangle_freedom(UNIT_CIRCLE, Triangle((0, -2), (2, 0), (0, 2)))
        assert st.freedom is Freedom.NOT_FREE

    def test_tangential_touch_is_free(self):
        st = triangle_freedom(UNIT_CIRCLE, Triangle((-2, 1), (2, 1), (0, 3)))
        assert st.freedom is Freedom.FREE
        assert st.case.kind is FreeCaseKind.ONE_TOUCH
        assert st.case.touch == pytest.approx((0.0, 1.0), abs=1e-12)

    def test_single_crossing_with_vertex_on_curve_is_almost_free(self):
        t = Triangle((-3, 1.5), (0.3, 0.2), (0, 1))
        st = triangle_freedom(UNIT_CIRCLE, t)
        assert st.freedom is Freedom.ALMOST_FREE
        assert st.side == 0
        x, y = st.hit.point
        assert x * x + y * y == pytest.approx(1.0, abs=1e-12)
        assert 0 < st.hit.param < 1

    def test_contained_circle_all_sides_free(self):
        st = triangle_freedom(UNIT_CIRCLE, Triangle((-2, -2), (2, -2), (0, 3)))
        assert st.freedom is Freedom.FREE
        assert st.case.kind is FreeCaseKind.NO_BOUNDARY


class TestCutConstructions:
    def test_all_sides_crossed_twice_gives_seven(self):
        t = Triangle((-1.5, -0.8), (1.5, -0.8), (0, 1.3))
        st = triangle_freedom(UNIT_CIRCLE, t)
        assert st.freedom is Freedom.NOT_FREE
        pieces = cut_no_free_sides(UNIT_CIRCLE, t, st.side_hits)
        assert len(pieces) == 7
        total = math.fsum(p.area for p in pieces)
        assert total == pytest.approx(t.area, rel=1e-12)

    def test_incircle_touches_give_four(self):
        r = 4 - 2 * math.sqrt(2)
        f = P2(x2=1, y2=1, x=-2 * r, y=-2 * r, c=r * r)
        c = normalize_conic(f)
        t = Triangle((0, 0), (4, 0), (0, 4))
        st = triangle_freedom(c, t)
        assert st.freedom is Freedom.NOT_FREE
        assert all(len([h for h in hits if not h.at_vertex]) == 1 for h in st.side_hits for hits in [h])
        pieces = cut_no_free_sides(c, t, st.side_hits)
        assert len(pieces) == 4
        assert math.fsum(p.area for p in pieces) == pytest.approx(t.area, rel=1e-12)

    def test_two_free_sides_with_both_cevians_crossed(self):
        t = Triangle((0, -2), (2, 0), (0, 2))
        st = triangle_freedom(UNIT_CIRCLE, t)
        assert st.freedom is Freedom.NOT_FREE
        interior = [[h for h in hits if not h.at_vertex] for hits in st.side_hits]
        assert [len(h) for h in interior] == [0, 0, 2]
        pieces = cut_two_free_sides(UNIT_CIRCLE, t, 2, st.side_hits)
        # both cevians are crossed, so the extra chord cut is taken
        assert len(pieces) == 4
        assert math.fsum(p.area for p in pieces) == pytest.approx(t.area, rel=1e-12)


class TestResolveAlmostFree:
    def test_opposite_vertex_on_curve_splits_in_two(self):
        t = Triangle((-3, 1.5), (0.3, 0.2), (0, 1))
        st = triangle_freedom(UNIT_CIRCLE, t)
        subs = resolve_almost_free(UNIT_CIRCLE, t, st.hit, st.side)
        assert len(subs) == 2
        assert math.fsum(p.area for p in subs) == pytest.approx(t.area, rel=1e-12)
        for p in subs:
            sub_st = triangle_freedom(UNIT_CIRCLE, p)
            assert sub_st.freedom is Freedom.FREE
            assert sub_st.case.kind is FreeCaseKind.TWO_VERTEX

    def test_adjacent_vertex_needs_tangency_when_chord_blocked(self):
        t = Triangle((1, 0), (-3, 0), (3, 4))
        st = triangle_freedom(UNIT_CIRCLE, t)
        assert st.freedom is Freedom.ALMOST_FREE
        subs = resolve_almost_free(UNIT_CIRCLE, t, st.hit, st.side)
        assert len(subs) == 4
        assert math.fsum(p.area for p in subs) == pytest.approx(t.area, rel=1e-12)
        for p in subs:
            assert triangle_freedom(UNIT_CIRCLE, p).freedom is Freedom.FREE
        # all four pieces meet at one interior point on the curve
        shared = [v for v in subs[0].vertices if all(v in q.vertices for q in subs)]
        assert len(shared) == 1
        x, y = shared[0]
        assert x * x + y * y == pytest.approx(1.0, abs=1e-9)
        assert point_in_triangle(shared[0], t) is PointLocation.INSIDE

    def test_touch_without_vertices_returns_input(self):
        t = Triangle((-2, 1), (2, 1), (0, 3))
        st = triangle_freedom(UNIT_CIRCLE, t)
        assert st.freedom is Freedom.FREE  # classified by freedom already
        subs = resolve_almost_free(UNIT_CIRCLE, t, st.hit, st.side)
        assert subs == [t]


class TestDecompose:
    def test_contained_circle_is_one_piece(self):
        trace = decompose(UNIT_CIRCLE, Triangle((-2, -2), (2, -2), (0, 3)))
        assert len(trace.pieces) == 1
        assert trace.pieces[0].case.kind is FreeCaseKind.NO_BOUNDARY
        assert trace.pieces[0].provenance == "whole"
        assert trace.internal_edges == []

    def test_three_double_crossings_give_seven(self):
        t = Triangle((-1.5, -0.8), (1.5, -0.8), (0, 1.3))
        trace = decompose(UNIT_CIRCLE, t)
        assert len(trace.pieces) == 7
        assert all(p.provenance == "all-sides-cut" for p in trace.pieces)
        assert len(trace.internal_edges) > 0

    def test_incircle_gives_four(self):
        r = 4 - 2 * math.sqrt(2)
        c = normalize_conic(P2(x2=1, y2=1, x=-2 * r, y=-2 * r, c=r * r))
        trace = decompose(c, Triangle((0, 0), (4, 0), (0, 4)))
        assert len(trace.pieces) == 4

    def test_chord_through_one_side_resolves_cevians(self):
        trace = decompose(UNIT_CIRCLE, Triangle((0, -2), (2, 0), (0, 2)))
        assert len(trace.pieces) == 7
        labels = {p.provenance for p in trace.pieces}
        assert "two-free-sides-cut" in labels
        assert "vertex-split" in labels

    def test_half_disc_triangle(self):
        trace = decompose(UNIT_CIRCLE, Triangle((-2, 0), (2, 0), (0, 2)))
        assert len(trace.pieces) == 7

    def test_corner_overlap_runs_deep_tangent_path(self):
        t = Triangle((-1.1, -1.2), (1.5, 0), (-1.1, 1.2))
        trace = decompose(UNIT_CIRCLE, t)
        labels = {p.provenance for p in trace.pieces}
        assert "one-free-side-cut" in labels
        assert "tangent-split" in labels
        assert "vertex-split" in labels
        assert len(trace.pieces) == 9

    def test_decompose_is_deterministic(self):
        t = Triangle((0, -2), (2, 0), (0, 2))
        a = decompose(UNIT_CIRCLE, t)
        b = decompose(UNIT_CIRCLE, t)
        assert [p.triangle.vertices for p in a.pieces] == [p.triangle.vertices for p in b.pieces]


def _sample_in(t: Triangle, rng: random.Random):
    a, b, c = t.vertices
    u, v = rng.random(), rng.random()
    if u + v > 1:
        u, v = 1 - u, 1 - v
    w = 1 - u - v
    return (
        w * a[0] + u * b[0] + v * c[0],
        w * a[1] + u * b[1] + v * c[1],
    )


@pytest.mark.parametrize("klass", sorted(NONDEGENERATE, key=lambda k: k.value))
def test_random_decompositions_certify(klass):
    rng = random.Random(f"subdivide-{klass.value}")
    done = 0
    for _ in range(60):
        g, f, t = random_instance(rng, klass)
        c = normalize_conic(f)
        trace = decompose(c, t)
        done += 1
        assert 1 <= len(trace.pieces) <= 11
        total = math.fsum(p.triangle.area for p in trace.pieces)
        assert total == pytest.approx(t.area, rel=1e-12)
        for e0, e1 in trace.internal_edges:
            assert segment_is_free(c, (e0, e1))
        # sampled points land inside exactly one piece (or on shared edges)
        for _ in range(25):
            p = _sample_in(t, rng)
            where = [point_in_triangle(p, piece.triangle) for piece in trace.pieces]
            inside = sum(1 for loc in where if loc is PointLocation.INSIDE)
            border = sum(1 for loc in where if loc is PointLocation.BORDER)
            assert inside <= 1
            assert inside == 1 or border >= 1
    assert done == 60
