"""Classification, normalization, intersections, and the triangle test."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from conicquad.conic import (
    Conic,
    ConicClass,
    PointLocation,
    conic_classify,
    conic_segment_intersections,
    normalize_conic,
    point_in_triangle,
    segment_is_free,
    tangency_interior_points,
)
from conicquad.errors import NoTangencyCandidate
from conicquad.geometry import Triangle, norm, sub
from conicquad.poly import Polynomial2
from conicquad.random_instances import (
    ALL_CLASSES,
    random_conic_with_anchor,
    random_rigid,
    random_triangle_near,
)

CIRCLE = Polynomial2({(2, 0): 1.0, (0, 2): 1.0, (0, 0): -1.0})


def P2(**named) -> Polynomial2:
    """Small helper: P2(x2=1, y2=1, c=-1) builds x^2 + y^2 - 1."""
    keymap = {"x2": (2, 0), "xy": (1, 1), "y2": (0, 2), "x": (1, 0), "y": (0, 1), "c": (0, 0)}
    return Polynomial2({keymap[k]: float(v) for k, v in named.items()})


class TestClassify:
    @pytest.mark.parametrize(
        "f,expect",
        [
            (P2(x2=1, y2=1, c=-1), ConicClass.ELLIPSE),
            (P2(x2=1, x=-1), ConicClass.PARALLEL_LINES),
            (P2(xy=1), ConicClass.CROSSING_LINES),
            (P2(x2=1, xy=2, y2=1, x=1, y=-1), ConicClass.PARABOLA),
            (P2(x2=1, y2=-1, c=-1), ConicClass.HYPERBOLA),
            (P2(x2=1, y2=1, c=1), ConicClass.EMPTY),
            (P2(x2=1, c=1), ConicClass.EMPTY),
            (P2(x2=1, y2=1), ConicClass.POINT),
            (P2(x2=1), ConicClass.DOUBLE_LINE),
            (P2(x=1, y=1, c=-1), ConicClass.SINGLE_LINE),
            (P2(c=5), ConicClass.CONSTANT_SIGN),
            (Polynomial2.zero(), ConicClass.CONSTANT_SIGN),
        ],
    )
    def test_examples(self, f, expect):
        assert conic_classify(f) is expect

    def test_parabola_invariants_by_rational_oracle(self):
        # x^2 + 2xy + y^2 + x - y: minor determinant and full determinant
        # recomputed in exact arithmetic
        a20, a11, a02, a10, a01, a00 = map(Fraction, (1, 2, 1, 1, -1, 0))
        minor = a20 * a02 - (a11 / 2) ** 2
        assert minor == 0
        b, d, e = a11 / 2, a10 / 2, a01 / 2
        det3 = a20 * (a02 * a00 - e * e) - b * (b * a00 - e * d) + d * (b * e - a02 * d)
        assert det3 == -1
        assert conic_classify(P2(x2=1, xy=2, y2=1, x=1, y=-1)) is ConicClass.PARABOLA

    def test_rigid_invariance(self):
        rng = random.Random(42)
        for _ in range(500):
            klass = rng.choice(ALL_CLASSES)
            f, _ = random_conic_with_anchor(rng, klass)
            m = random_rigid(rng)
            assert conic_classify(f.compose(m)) is klass

    def test_borderline_goes_degenerate(self):
        # a circle of radius 1e-5.5: the full determinant sits below the
        # classification threshold, so it collapses to Point
        tiny = normalize_conic(P2(x2=1, y2=1, c=-1e-11))
        assert tiny.klass is ConicClass.POINT
        assert tiny.margins["det3"] < 1.0
        small = normalize_conic(P2(x2=1, y2=1, c=-1e-8))
        assert small.klass is ConicClass.ELLIPSE
        assert small.margins["det3"] > 1.0


class TestNormalize:
    def test_axis_aligned_ellipse(self):
        c = normalize_conic(P2(x2=4, y2=9, c=-36))
        assert c.klass is ConicClass.ELLIPSE
        assert c.params["a"] == pytest.approx(3.0, rel=1e-14)
        assert c.params["b"] == pytest.approx(2.0, rel=1e-14)
        assert c.lam == pytest.approx(36.0, rel=1e-14)
        # rigid frame
        assert abs(abs(c.to_standard.det()) - 1.0) < 1e-14

    def test_hyperbola_asymptote_frame(self):
        c = normalize_conic(P2(x2=1, y2=-1, c=-1))
        assert c.klass is ConicClass.HYPERBOLA
        assert c.params["k"] == pytest.approx(0.5, rel=1e-13)
        assert c.lam == pytest.approx(2.0, rel=1e-13)
        # the frame rows are the asymptote unit normals, at 45 degrees here
        m = c.to_standard
        assert abs(m.det()) == pytest.approx(1.0, rel=1e-12)  # sin(90deg) between normals

    def test_parallel_lines_unit_gap(self):
        c = normalize_conic(P2(x2=1, x=-1))
        assert c.klass is ConicClass.PARALLEL_LINES
        assert c.params["d"] == pytest.approx(1.0, rel=1e-14)
        assert abs(c.lam) == pytest.approx(1.0, rel=1e-14)

    def test_no_map_classes(self):
        assert normalize_conic(P2(x2=1, y2=1, c=1)).to_standard is None
        assert normalize_conic(P2(x2=1, y2=1)).to_standard is None
        assert normalize_conic(P2(c=3)).to_standard is None

    def test_standard_form_identity(self):
        # f composed with the inverse frame map equals lam times the
        # standard member, sampled on a grid
        rng = random.Random(7)
        checked = 0
        for _ in range(500):
            klass = rng.choice(ALL_CLASSES)
            f, _ = random_conic_with_anchor(rng, klass)
            c = normalize_conic(f)
            assert c.klass is klass
            std = c.standard_poly()
            if std is None:
                assert c.to_standard is None
                continue
            back = c.to_standard.inverse()
            fnorm = max(abs(v) for _, v in f.terms())
            for gi in range(10):
                for gj in range(10):
                    u = -1.0 + 2.0 * gi / 9.0
                    v = -1.0 + 2.0 * gj / 9.0
                    got = f(*back((u, v)))
                    want = c.lam * std(u, v)
                    assert abs(got - want) <= 1e-9 * max(1.0, fnorm), (klass, got, want)
            checked += 1
        assert checked > 300


class TestSegmentIntersections:
    def test_two_transversal_hits(self):
        hits = conic_segment_intersections(CIRCLE, ((-2.0, 0.0), (2.0, 0.0)))
        assert len(hits) == 2
        assert hits[0].param == pytest.approx(0.25, abs=1e-15)
        assert hits[1].param == pytest.approx(0.75, abs=1e-15)
        assert hits[0].point == pytest.approx((-1.0, 0.0), abs=1e-15)
        assert hits[1].point == pytest.approx((1.0, 0.0), abs=1e-15)
        assert all(h.multiplicity == 1 and not h.at_vertex for h in hits)

    def test_tangent_line(self):
        hits = conic_segment_intersections(CIRCLE, ((-2.0, 1.0), (2.0, 1.0)))
        assert len(hits) == 1
        assert hits[0].multiplicity == 2
        assert not hits[0].at_vertex
        assert hits[0].point == pytest.approx((0.0, 1.0), abs=1e-12)

    def test_endpoint_on_curve(self):
        hyp = P2(xy=1, c=-1)
        hits = conic_segment_intersections(hyp, ((1.0, 1.0), (3.0, 1.0)))
        assert len(hits) == 1
        assert hits[0].at_vertex
        assert hits[0].param == 0.0
        assert hits[0].point == (1.0, 1.0)

    def test_miss(self):
        assert conic_segment_intersections(CIRCLE, ((2.0, 0.0), (3.0, 0.0))) == []

    def test_vertex_tangency_collapses_to_one_vertex_hit(self):
        # circle tangent to the segment exactly at its left endpoint
        hits = conic_segment_intersections(CIRCLE, ((0.0, 1.0), (4.0, 1.0)))
        assert len(hits) == 1
        assert hits[0].at_vertex and hits[0].multiplicity == 2

    def test_hit_points_lie_on_conic(self):
        rng = random.Random(13)
        for _ in range(300):
            klass = rng.choice(
                (ConicClass.ELLIPSE, ConicClass.PARABOLA, ConicClass.HYPERBOLA)
            )
            f, anchor = random_conic_with_anchor(rng, klass)
            p0 = (anchor[0] + rng.uniform(-3, 3), anchor[1] + rng.uniform(-3, 3))
            p1 = (anchor[0] + rng.uniform(-3, 3), anchor[1] + rng.uniform(-3, 3))
            if norm(sub(p1, p0)) < 1e-6:
                continue
            reach = max(1.0, norm(p0), norm(p1))
            for h in conic_segment_intersections(f, (p0, p1)):
                assert abs(f(*h.point)) <= 1e-9 * f.l1_scaled(reach)

    def test_segment_is_free_examples(self):
        assert segment_is_free(CIRCLE, ((-1.0, 0.0), (1.0, 0.0)))      # chord
        assert not segment_is_free(CIRCLE, ((-2.0, 0.0), (2.0, 0.0)))  # crosses twice
        assert segment_is_free(CIRCLE, ((2.0, 0.0), (3.0, 0.0)))       # disjoint


class TestPointInTriangle:
    T = Triangle((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))

    def test_examples(self):
        assert point_in_triangle((0.25, 0.25), self.T) is PointLocation.INSIDE
        assert point_in_triangle((0.5, 0.5), self.T) is PointLocation.BORDER
        assert point_in_triangle((2.0, 0.0), self.T) is PointLocation.OUTSIDE

    def test_vertices_are_border(self):
        for v in self.T.vertices:
            assert point_in_triangle(v, self.T) is PointLocation.BORDER

    def test_cyclic_relabeling(self):
        rng = random.Random(3)
        pts = [(0.3, -0.2), (2.1, 0.4), (0.8, 1.9)]
        tris = [Triangle(pts[0], pts[1], pts[2]), Triangle(pts[1], pts[2], pts[0]), Triangle(pts[2], pts[0], pts[1])]
        for _ in range(200):
            p = (rng.uniform(-1, 3), rng.uniform(-1, 3))
            results = {point_in_triangle(p, t) for t in tris}
            assert len(results) == 1


class TestTangencyPoints:
    def test_circle_three_constructions(self):
        c = normalize_conic(CIRCLE)
        pts = tangency_interior_points(c, (1.0, 0.0), (2.0, 0.0), (0.0, 2.0))
        s2 = math.sqrt(2.0) / 2.0
        s3 = math.sqrt(3.0) / 2.0
        expected = [(s2, s2), (0.5, s3), (s3, 0.5)]
        assert len(pts) == 3
        for want, got in zip(expected, pts):
            assert got == pytest.approx(want, abs=1e-12)

    def test_candidate_segments_are_free(self):
        c = normalize_conic(CIRCLE)
        b, cpt = (2.0, 0.0), (0.0, 2.0)
        for p in tangency_interior_points(c, (1.0, 0.0), b, cpt):
            assert segment_is_free(c, (b, p))
            assert segment_is_free(c, (cpt, p))

    def test_parabola_parallel_tangent(self):
        # for y = x^2 the tangent parallel to the x-range [0, 1] chord
        # touches at x = 1/2; anchor points sit below their tangents
        f = P2(y=1, x2=-1)
        c = normalize_conic(f)
        b, cpt = (0.0, -0.5), (1.0, 0.5)
        pts = tangency_interior_points(c, (0.0, 0.0), b, cpt)
        assert any(p == pytest.approx((0.5, 0.25), abs=1e-12) for p in pts)
        for p in pts:
            assert segment_is_free(c, (b, p))
            assert segment_is_free(c, (cpt, p))

    def test_hyperbola_branch_restriction(self):
        c = normalize_conic(P2(xy=1, c=-1))
        b, cpt = (0.2, 0.8), (0.8, 0.2)
        pts = tangency_interior_points(c, (1.0, 1.0), b, cpt)
        assert any(p == pytest.approx((1.0, 1.0), abs=1e-12) for p in pts)
        for p in pts:
            assert p[0] > 0  # same branch as the hint
            assert segment_is_free(c, (b, p))
            assert segment_is_free(c, (cpt, p))

    def test_no_candidate_raises(self):
        # both probes inside the circle: every tangent line leaves them on
        # the curve side, so nothing survives
        c = normalize_conic(CIRCLE)
        with pytest.raises(NoTangencyCandidate):
            tangency_interior_points(c, (1.0, 0.0), (0.1, 0.0), (0.0, 0.1))


class TestRandomInstanceSanity:
    def test_triangles_are_fat_and_nearby(self):
        rng = random.Random(1)
        for klass in ALL_CLASSES:
            f, anchor = random_conic_with_anchor(rng, klass)
            t = random_triangle_near(rng, anchor)
            assert t.area >= 0.3
            assert all(abs(coord) <= 8.0 for v in t.vertices for coord in v)
