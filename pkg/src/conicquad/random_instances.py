"""Seeded random test instances, stratified by conic class.

Conics are built by composing a standard family member (with randomly drawn
shape parameters kept within moderate ranges) with a random rigid motion
and a random proportionality factor, so every class can be hit on demand
and the expected classification is known by construction. Triangles are
sampled near an anchor point on or around the curve so the interesting
interactions (crossings, tangencies nearby, containment) actually occur
instead of everything being disjoint.

Everything takes an explicit random.Random so test batteries are
reproducible from a seed.
"""

from __future__ import annotations

import math
import random

from .conic import ConicClass, conic_classify
from .errors import DegenerateTriangle
from .geometry import AffineMap2, Point, Triangle
from .poly import Polynomial2

ALL_CLASSES = (
    ConicClass.ELLIPSE,
    ConicClass.PARABOLA,
    ConicClass.HYPERBOLA,
    ConicClass.CROSSING_LINES,
    ConicClass.PARALLEL_LINES,
    ConicClass.DOUBLE_LINE,
    ConicClass.SINGLE_LINE,
    ConicClass.POINT,
    ConicClass.EMPTY,
    ConicClass.CONSTANT_SIGN,
)

NONDEGENERATE = (ConicClass.ELLIPSE, ConicClass.PARABOLA, ConicClass.HYPERBOLA)


def random_rigid(rng: random.Random, shift: float = 1.5) -> AffineMap2:
    theta = rng.uniform(0.0, 2.0 * math.pi)
    return AffineMap2.translation(
        rng.uniform(-shift, shift), rng.uniform(-shift, shift)
    ).compose(AffineMap2.rotation(theta))


def _lam(rng: random.Random) -> float:
    return rng.choice((-1.0, 1.0)) * rng.uniform(0.5, 2.0)


def random_conic_with_anchor(
    rng: random.Random, klass: ConicClass
) -> tuple[Polynomial2, Point]:
    """A polynomial of the requested class plus a world point near its
    geometry (center, vertex, or a point on the curve)."""
    for _ in range(20):
        f, anchor_std = _build(rng, klass)
        m = random_rigid(rng)
        # f_world(p) = lam * std(m(p)); the curve sits at m^-1(std curve)
        world = f.compose(m)
        anchor = m.inverse()(anchor_std)
        if conic_classify(world) is klass:
            return world, anchor
    raise RuntimeError(f"could not build a stable {klass.value} instance")


def _build(rng: random.Random, klass: ConicClass) -> tuple[Polynomial2, Point]:
    lam = _lam(rng)
    if klass is ConicClass.ELLIPSE:
        a = rng.uniform(0.3, 2.0)
        b = rng.uniform(0.3, 2.0)
        f = Polynomial2({(2, 0): 1.0 / (a * a), (0, 2): 1.0 / (b * b), (0, 0): -1.0})
        anchor = rng.choice(((0.0, 0.0), (a, 0.0), (0.0, b)))
    elif klass is ConicClass.PARABOLA:
        c = rng.uniform(0.2, 2.5)
        f = Polynomial2({(0, 1): 1.0, (2, 0): -c})
        anchor = (0.0, 0.0)
    elif klass is ConicClass.HYPERBOLA:
        a = rng.uniform(0.3, 2.0)
        b = rng.uniform(0.3, 2.0)
        f = Polynomial2({(2, 0): 1.0 / (a * a), (0, 2): -1.0 / (b * b), (0, 0): -1.0})
        anchor = rng.choice(((0.0, 0.0), (a, 0.0), (-a, 0.0)))
    elif klass is ConicClass.CROSSING_LINES:
        phi = rng.uniform(0.0, math.pi)
        gap = rng.uniform(math.radians(25.0), math.radians(155.0))
        n1 = (math.cos(phi), math.sin(phi))
        n2 = (math.cos(phi + gap), math.sin(phi + gap))
        l1 = Polynomial2({(1, 0): n1[0], (0, 1): n1[1]})
        l2 = Polynomial2({(1, 0): n2[0], (0, 1): n2[1]})
        f = l1 * l2
        anchor = (0.0, 0.0)
    elif klass is ConicClass.PARALLEL_LINES:
        d = rng.uniform(0.3, 2.0)
        f = Polynomial2({(2, 0): 1.0, (1, 0): -d})
        anchor = (d / 2.0, 0.0)
    elif klass is ConicClass.DOUBLE_LINE:
        f = Polynomial2({(2, 0): 1.0})
        anchor = (0.0, 0.0)
    elif klass is ConicClass.SINGLE_LINE:
        f = Polynomial2({(1, 0): 1.0})
        anchor = (0.0, 0.0)
    elif klass is ConicClass.POINT:
        f = Polynomial2({(2, 0): 1.0, (0, 2): 1.0})
        anchor = (0.0, 0.0)
    elif klass is ConicClass.EMPTY:
        f = Polynomial2({(2, 0): 1.0, (0, 2): 1.0, (0, 0): 1.0})
        anchor = (0.0, 0.0)
    elif klass is ConicClass.CONSTANT_SIGN:
        return Polynomial2.constant(lam), (0.0, 0.0)
    else:
        raise ValueError(f"unhandled class {klass}")
    return lam * f, anchor


def random_triangle_near(
    rng: random.Random,
    anchor: Point,
    half: float = 2.5,
    min_area: float = 0.3,
) -> Triangle:
    for _ in range(100):
        pts = [
            (anchor[0] + rng.uniform(-half, half), anchor[1] + rng.uniform(-half, half))
            for _ in range(3)
        ]
        try:
            t = Triangle(*pts)
        except DegenerateTriangle:
            continue
        if t.area >= min_area:
            return t
    raise RuntimeError("could not sample a fat enough triangle")


def random_integrand(rng: random.Random, degree: int = 4) -> Polynomial2:
    return Polynomial2(
        {
            (i, j): rng.uniform(-1.0, 1.0)
            for i in range(degree + 1)
            for j in range(degree + 1 - i)
        }
    )


def positive_integrand(rng: random.Random, t: Triangle) -> Polynomial2:
    """A random quartic shifted to be strictly positive on t, so that the
    full-triangle integral is safely away from zero and relative
    comparisons against it are meaningful."""
    g0 = random_integrand(rng)
    reach = max(abs(c) for v in t.vertices for c in v)
    bound = g0.l1_scaled(max(1.0, reach))
    return g0 + Polynomial2.constant(2.0 * bound)


def random_instance(
    rng: random.Random, klass: ConicClass
) -> tuple[Polynomial2, Polynomial2, Triangle]:
    """(g, f, t) with f of the requested class and t near its geometry."""
    f, anchor = random_conic_with_anchor(rng, klass)
    t = random_triangle_near(rng, anchor)
    return random_integrand(rng), f, t


def random_nondegenerate_instance(
    rng: random.Random,
) -> tuple[Polynomial2, Polynomial2, Triangle]:
    return random_instance(rng, rng.choice(NONDEGENERATE))
