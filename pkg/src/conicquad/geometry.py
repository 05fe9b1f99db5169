"""Points, affine maps, triangles.

Points are plain (x, y) tuples of floats throughout the package; we only
wrap things in classes where there is real invariant-keeping to do
(Triangle normalizes orientation, AffineMap2 keeps its six entries
together).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateTriangle

Point = tuple[float, float]

# Triangles with |2*signed_area| below this times the squared diameter are
# rejected as degenerate.
AREA_REL_EPS = 1e-14


def sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def add(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1])


def scale(p: Point, s: float) -> Point:
    return (p[0] * s, p[1] * s)


def dot(p: Point, q: Point) -> float:
    return p[0] * q[0] + p[1] * q[1]


def cross(p: Point, q: Point) -> float:
    return p[0] * q[1] - p[1] * q[0]


def norm(p: Point) -> float:
    return math.hypot(p[0], p[1])


def midpoint(p: Point, q: Point) -> Point:
    return ((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0)


def lerp(p: Point, q: Point, t: float) -> Point:
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def unit(p: Point) -> Point:
    n = norm(p)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return (p[0] / n, p[1] / n)


def rot90(p: Point) -> Point:
    """Counterclockwise quarter turn."""
    return (-p[1], p[0])


@dataclass(frozen=True)
class AffineMap2:
    """Affine map of the plane: (x, y) -> (a x + b y + tx, c x + d y + ty)."""

    a: float
    b: float
    c: float
    d: float
    tx: float = 0.0
    ty: float = 0.0

    @classmethod
    def identity(cls) -> "AffineMap2":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def rotation(cls, theta: float) -> "AffineMap2":
        co, si = math.cos(theta), math.sin(theta)
        return cls(co, -si, si, co)

    @classmethod
    def translation(cls, tx: float, ty: float) -> "AffineMap2":
        return cls(1.0, 0.0, 0.0, 1.0, tx, ty)

    @classmethod
    def from_rows(cls, row1: Point, row2: Point, shift: Point = (0.0, 0.0)) -> "AffineMap2":
        return cls(row1[0], row1[1], row2[0], row2[1], shift[0], shift[1])

    def apply(self, p: Point) -> Point:
        x, y = p
        return (self.a * x + self.b * y + self.tx, self.c * x + self.d * y + self.ty)

    def __call__(self, p: Point) -> Point:
        return self.apply(p)

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def compose(self, other: "AffineMap2") -> "AffineMap2":
        """self after other: (self.compose(other))(p) == self(other(p))."""
        return AffineMap2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.a * other.tx + self.b * other.ty + self.tx,
            self.c * other.tx + self.d * other.ty + self.ty,
        )

    def inverse(self) -> "AffineMap2":
        det = self.det()
        if det == 0.0:
            raise ValueError("affine map is singular")
        ia, ib = self.d / det, -self.b / det
        ic, id_ = -self.c / det, self.a / det
        return AffineMap2(ia, ib, ic, id_, -(ia * self.tx + ib * self.ty), -(ic * self.tx + id_ * self.ty))


class Triangle:
    """A nondegenerate triangle, stored counterclockwise.

    The constructor reorders (swaps the last two vertices) if the input is
    clockwise and raises DegenerateTriangle when the area is numerically
    zero relative to the squared diameter.
    """

    __slots__ = ("a", "b", "c")

    def __init__(self, a: Point, b: Point, c: Point):
        a = (float(a[0]), float(a[1]))
        b = (float(b[0]), float(b[1]))
        c = (float(c[0]), float(c[1]))
        twice_area = cross(sub(b, a), sub(c, a))
        diam2 = max(
            (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2,
            (c[0] - b[0]) ** 2 + (c[1] - b[1]) ** 2,
            (a[0] - c[0]) ** 2 + (a[1] - c[1]) ** 2,
        )
        if not all(math.isfinite(v) for v in (*a, *b, *c)):
            raise DegenerateTriangle("triangle has non-finite coordinates")
        if abs(twice_area) <= AREA_REL_EPS * diam2 or twice_area == 0.0:
            raise DegenerateTriangle(f"triangle is degenerate: {a}, {b}, {c}")
        if twice_area < 0.0:
            b, c = c, b
        self.a = a
        self.b = b
        self.c = c

    @property
    def vertices(self) -> tuple[Point, Point, Point]:
        return (self.a, self.b, self.c)

    @property
    def area(self) -> float:
        return cross(sub(self.b, self.a), sub(self.c, self.a)) / 2.0

    @property
    def centroid(self) -> Point:
        return (
            (self.a[0] + self.b[0] + self.c[0]) / 3.0,
            (self.a[1] + self.b[1] + self.c[1]) / 3.0,
        )

    def sides(self) -> tuple[tuple[Point, Point], tuple[Point, Point], tuple[Point, Point]]:
        """The three directed sides (a,b), (b,c), (c,a)."""
        return ((self.a, self.b), (self.b, self.c), (self.c, self.a))

    def diameter(self) -> float:
        return max(
            norm(sub(self.b, self.a)),
            norm(sub(self.c, self.b)),
            norm(sub(self.a, self.c)),
        )

    def __repr__(self) -> str:
        return f"Triangle({self.a}, {self.b}, {self.c})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Triangle):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)
