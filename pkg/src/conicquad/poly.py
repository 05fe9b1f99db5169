"""Bivariate polynomials and exact integration over triangles.

The central fact everything else builds on: over the reference triangle with
vertices (0,0), (1,0), (1,1),

    integral of x^i y^j  =  1 / ((j + 1) (i + j + 2)),

because the inner integral in y from 0 to x gives x^(i+j+1)/(j+1) and the
outer integral adds the second factor. A general triangle is pulled back to
the reference triangle by the affine map

    phi(u, v) = a + u (b - a) + v (c - b),

whose Jacobian determinant is twice the signed area, so

    integral over T of g  =  2 area(T) * integral over ref of (g o phi).

Coefficients live in a dict keyed by (i, j). Evaluation is graded Horner
(Horner in y inside Horner in x), and the reference-triangle sum goes
through math.fsum to keep cancellation between terms from costing accuracy.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator

from .geometry import AffineMap2, Point, Triangle, cross, sub

Key = tuple[int, int]


class Polynomial2:
    """A polynomial in two variables with float coefficients.

    Immutable in spirit: every operation returns a new instance. Zero
    coefficients are dropped, so the zero polynomial has no terms and
    degree() == -1.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: dict[Key, float] | None = None):
        c: dict[Key, float] = {}
        if coeffs:
            for (i, j), v in coeffs.items():
                v = float(v)
                if v != 0.0:
                    c[(int(i), int(j))] = v
        self._c = c

    @classmethod
    def zero(cls) -> "Polynomial2":
        return cls()

    @classmethod
    def constant(cls, value: float) -> "Polynomial2":
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, i: int, j: int, coeff: float = 1.0) -> "Polynomial2":
        return cls({(i, j): coeff})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int, float]]) -> "Polynomial2":
        c: dict[Key, float] = {}
        for i, j, v in terms:
            key = (int(i), int(j))
            c[key] = c.get(key, 0.0) + float(v)
        return cls(c)

    def terms(self) -> Iterator[tuple[Key, float]]:
        """Terms in a fixed (graded lexicographic) order."""
        for key in sorted(self._c, key=lambda k: (k[0] + k[1], k[0])):
            yield key, self._c[key]

    def coeff(self, i: int, j: int) -> float:
        return self._c.get((i, j), 0.0)

    def coeff_dict(self) -> dict[Key, float]:
        return dict(self._c)

    def degree(self) -> int:
        if not self._c:
            return -1
        return max(i + j for i, j in self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __call__(self, x: float, y: float) -> float:
        if not self._c:
            return 0.0
        rows: dict[int, dict[int, float]] = {}
        for (i, j), v in self._c.items():
            rows.setdefault(i, {})[j] = v
        total = 0.0
        for i in range(max(rows), -1, -1):
            row = rows.get(i)
            if row is None:
                rowval = 0.0
            else:
                rowval = 0.0
                for j in range(max(row), -1, -1):
                    rowval = rowval * y + row.get(j, 0.0)
            total = total * x + rowval
        return total

    def __add__(self, other: "Polynomial2") -> "Polynomial2":
        c = dict(self._c)
        for key, v in other._c.items():
            c[key] = c.get(key, 0.0) + v
        return Polynomial2(c)

    def __sub__(self, other: "Polynomial2") -> "Polynomial2":
        c = dict(self._c)
        for key, v in other._c.items():
            c[key] = c.get(key, 0.0) - v
        return Polynomial2(c)

    def __neg__(self) -> "Polynomial2":
        return Polynomial2({k: -v for k, v in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial2):
            c: dict[Key, float] = {}
            for (i1, j1), v1 in self._c.items():
                for (i2, j2), v2 in other._c.items():
                    key = (i1 + i2, j1 + j2)
                    c[key] = c.get(key, 0.0) + v1 * v2
            return Polynomial2(c)
        return Polynomial2({k: v * float(other) for k, v in self._c.items()})

    __rmul__ = __mul__

    def partial_x(self) -> "Polynomial2":
        return Polynomial2({(i - 1, j): i * v for (i, j), v in self._c.items() if i > 0})

    def partial_y(self) -> "Polynomial2":
        return Polynomial2({(i, j - 1): j * v for (i, j), v in self._c.items() if j > 0})

    def antiderivative_y(self) -> "Polynomial2":
        """Termwise integral in y with zero constant."""
        return Polynomial2({(i, j + 1): v / (j + 1) for (i, j), v in self._c.items()})

    def compose(self, m: AffineMap2) -> "Polynomial2":
        """Substitute (x, y) = m(u, v); plain substitution, so m does not
        need to be invertible."""
        if not self._c:
            return Polynomial2()
        x_img = Polynomial2({(1, 0): m.a, (0, 1): m.b, (0, 0): m.tx})
        y_img = Polynomial2({(1, 0): m.c, (0, 1): m.d, (0, 0): m.ty})
        max_i = max(i for i, _ in self._c)
        max_j = max(j for _, j in self._c)
        xp = [Polynomial2.constant(1.0)]
        for _ in range(max_i):
            xp.append(xp[-1] * x_img)
        yp = [Polynomial2.constant(1.0)]
        for _ in range(max_j):
            yp.append(yp[-1] * y_img)
        acc: dict[Key, float] = {}
        for (i, j), v in self._c.items():
            for key, w in (xp[i] * yp[j])._c.items():
                acc[key] = acc.get(key, 0.0) + v * w
        return Polynomial2(acc)

    def max_abs_coeff(self) -> float:
        return max((abs(v) for v in self._c.values()), default=0.0)

    def l1_scaled(self, length: float) -> float:
        """Sum of |coeff| * length^degree, a magnitude scale for values of
        the polynomial at points within `length` of the origin."""
        return math.fsum(abs(v) * length ** (i + j) for (i, j), v in self._c.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial2):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __repr__(self) -> str:
        if not self._c:
            return "Polynomial2(0)"
        bits = []
        for (i, j), v in self.terms():
            mono = "".join(p for p, e in (("x^%d" % i if i > 1 else "x" * min(i, 1), i),
                                          ("y^%d" % j if j > 1 else "y" * min(j, 1), j)) if e)
            bits.append(f"{v:g}{'*' + mono if mono else ''}")
        return "Polynomial2(" + " + ".join(bits) + ")"


_SPLITTER = 134217729.0  # 2**27 + 1, for Dekker's exact product splitting


def _div_residue(v: float, n: int, q: float) -> float:
    """Exact residue v - q*n of the rounded division q = fl(v / n).

    n is a small positive integer, so q*n fits in a double-double computed
    by splitting q; v - hi is then exact by Sterbenz. Lets the caller feed
    the division error back into a compensated sum.
    """
    c = q * _SPLITTER
    hi = c - (c - q)
    lo = q - hi
    p = q * n
    e = (hi * n - p) + lo * n
    return (v - p) - e


def reference_triangle_integral(g: Polynomial2) -> float:
    """Integral of g over the triangle (0,0), (1,0), (1,1).

    Each monomial contributes b_ij / ((j+1)(i+j+2)). The divisions are
    compensated (residue folded back in) and the terms go through fsum, so
    the result is correctly rounded even when the terms mostly cancel.
    """
    parts = []
    for (i, j), v in g._c.items():
        n = (j + 1) * (i + j + 2)
        q = v / n
        parts.append(q)
        parts.append(_div_residue(v, n, q) / n)
    return math.fsum(parts)


def pullback_map(a: Point, b: Point, c: Point) -> AffineMap2:
    """The affine map sending the reference triangle to (a, b, c)."""
    return AffineMap2(b[0] - a[0], c[0] - b[0],
                      b[1] - a[1], c[1] - b[1],
                      a[0], a[1])


def signed_triangle_integral(g: Polynomial2, a: Point, b: Point, c: Point) -> float:
    """Integral of g over the triangle (a, b, c), signed by orientation.

    Degenerate inputs integrate to zero; this is the workhorse for the
    circular-segment formula where the "triangle" can legitimately be thin
    or backwards.
    """
    jac = cross(sub(b, a), sub(c, b))
    if jac == 0.0:
        return 0.0
    return jac * reference_triangle_integral(g.compose(pullback_map(a, b, c)))


def triangle_integral(g: Polynomial2, t: Triangle) -> float:
    """Integral of g over the triangle t (unsigned, t is counterclockwise)."""
    return signed_triangle_integral(g, t.a, t.b, t.c)


# Free-function spellings of the Polynomial2 methods. The quadratic-times-
# quadratic product is the one place a degree cap is enforced, because a
# product integrand beyond degree 4 has no closed form downstream.

MAX_INTEGRAND_DEGREE = 4


def poly_mul(p: Polynomial2, q: Polynomial2) -> Polynomial2:
    if p.degree() + q.degree() > MAX_INTEGRAND_DEGREE:
        raise ValueError(
            f"product degree {p.degree()} + {q.degree()} exceeds the "
            f"integrand cap of {MAX_INTEGRAND_DEGREE}"
        )
    return p * q


def poly_eval(p: Polynomial2, point: Point) -> float:
    return p(point[0], point[1])


def poly_compose_affine(p: Polynomial2, m: AffineMap2) -> Polynomial2:
    return p.compose(m)
