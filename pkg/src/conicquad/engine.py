"""Top-level orchestration: classify, decompose, integrate, and report.

integrate_region is the product: the exact integral of a polynomial g of
degree up to 4 over the part of a triangle where a quadratic f is
nonnegative. Degenerate conics go straight to polygon clipping; everything
else is cut into certified free triangles whose closed forms are summed.
The result carries the decomposition trace (with per-piece contributions
filled in) and any numerical-health warnings.

integrate_band reduces a two-sided constraint f_a <= -p/alpha <= f_b to
two one-sided calls by inclusion-exclusion: with f1 = -p/alpha - f_a and
f2 = f_b + p/alpha, a point fails both constraints only if -p/alpha is
simultaneously below f_a and above f_b, which is impossible when
f_a <= f_b. So {f1 >= 0} union {f2 >= 0} covers the whole triangle and

    band integral = I1 + I2 - I_T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import tolerances
from .basecase import CANCELLATION_RATIO, degenerate_integral, integrate_free_triangle
from .conic import Conic, normalize_conic
from .geometry import Triangle
from .poly import MAX_INTEGRAND_DEGREE, Polynomial2, poly_mul, triangle_integral
from .subdivide import DecompositionTrace, decompose
from .tolerances import Tolerances

# Classification margins below this multiple of the decision threshold get
# a warning: the class is still trusted, but the input is close to a fence.
MARGIN_WARN_FACTOR = 10.0


@dataclass(frozen=True)
class IntegralResult:
    """Value plus how it was obtained.

    trace is None exactly when the conic was degenerate (the region is a
    polygon and there is nothing to decompose). warnings are short
    human-readable strings; an empty tuple on well-conditioned inputs.
    """

    value: float
    trace: DecompositionTrace | None
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class BandSpec:
    """The region t cap {f_a <= -p/alpha <= f_b}.

    p is the quadratic whose scaled level band is being integrated over,
    alpha must be positive and f_a <= f_b.
    """

    p: Polynomial2
    alpha: float
    f_a: float
    f_b: float

    def validate(self) -> None:
        if not (self.alpha > 0.0) or not math.isfinite(self.alpha):
            raise ValueError(f"band alpha must be positive, got {self.alpha}")
        if not (self.f_a <= self.f_b):
            raise ValueError(f"band needs f_a <= f_b, got [{self.f_a}, {self.f_b}]")
        if self.p.degree() > 2:
            raise ValueError("band polynomial must have degree <= 2")


def _check_degrees(g: Polynomial2, f: Polynomial2) -> None:
    if g.degree() > MAX_INTEGRAND_DEGREE:
        raise ValueError(
            f"integrand degree {g.degree()} exceeds the cap of {MAX_INTEGRAND_DEGREE}"
        )
    if f.degree() > 2:
        raise ValueError(f"region polynomial must be quadratic, got degree {f.degree()}")
    for _, coeff in g.terms():
        if not math.isfinite(coeff):
            raise ValueError("integrand has a non-finite coefficient")
    for _, coeff in f.terms():
        if not math.isfinite(coeff):
            raise ValueError("region polynomial has a non-finite coefficient")


def _margin_warnings(c: Conic) -> list[str]:
    # each margin is |quantity| / decision threshold: values far above 1
    # are confidently nondegenerate, far below confidently degenerate, and
    # anything within a factor of MARGIN_WARN_FACTOR of the fence is shaky
    out = []
    for name, ratio in sorted(c.margins.items()):
        if 1.0 / MARGIN_WARN_FACTOR < ratio < MARGIN_WARN_FACTOR:
            out.append(
                f"classification margin '{name}' is within {MARGIN_WARN_FACTOR:g}x "
                f"of the decision threshold ({ratio:.3g}); class "
                f"{c.klass.value} is nearly ambiguous"
            )
    return out


def integrate_region(
    g: Polynomial2,
    f: Polynomial2,
    t: Triangle,
    tol: Tolerances | None = None,
) -> IntegralResult:
    """Integral of g over t cap {f >= 0}, with trace and warnings."""
    tol = tol or tolerances.active()
    _check_degrees(g, f)
    c = normalize_conic(f, tol)
    warnings = _margin_warnings(c)

    if not c.is_nondegenerate():
        value = degenerate_integral(g, c, t, tol)
        return IntegralResult(value, None, tuple(warnings))

    trace = decompose(c, t, tol)
    contributions = []
    operand_scale = 0.0
    for piece in trace.pieces:
        v = integrate_free_triangle(g, c, piece.triangle, piece.case, tol)
        piece.contribution = v
        contributions.append(v)
        # the base case may have formed v as (whole piece) - (chord region),
        # so both the contribution and the piece total bound its operands
        piece_total = triangle_integral(g, piece.triangle)
        operand_scale = max(operand_scale, abs(v), abs(piece_total))
    value = math.fsum(contributions)

    if operand_scale > CANCELLATION_RATIO * max(abs(value), 1e-300):
        warnings.append(
            f"result {value:.6g} comes from differences with operands up to "
            f"{operand_scale:.6g}; relative accuracy is limited accordingly"
        )
    return IntegralResult(value, trace, tuple(warnings))


def band_halves(band: BandSpec) -> tuple[Polynomial2, Polynomial2]:
    """The two quadratics whose nonnegative regions intersect in the band.

    f1 >= 0 is the half f_a <= -p/alpha, f2 >= 0 the half -p/alpha <= f_b;
    their union covers the plane because f_a <= f_b, which is what makes
    the inclusion-exclusion in integrate_band exact.
    """
    band.validate()
    scaled = band.p * (-1.0 / band.alpha)
    f1 = scaled - Polynomial2.constant(band.f_a)
    f2 = Polynomial2.constant(band.f_b) - scaled
    return f1, f2


def integrate_band(
    v: Polynomial2,
    band: BandSpec,
    t: Triangle,
    tol: Tolerances | None = None,
) -> float:
    """Integral of v over t cap {f_a <= -p/alpha <= f_b}."""
    f1, f2 = band_halves(band)
    i1 = integrate_region(v, f1, t, tol).value
    i2 = integrate_region(v, f2, t, tol).value
    i_t = triangle_integral(v, t)
    return math.fsum((i1, i2, -i_t))


def projection_integrand(phi1: Polynomial2, phi2: Polynomial2) -> Polynomial2:
    """Product of two quadratic shape functions, the degree-4 integrand."""
    if phi1.degree() > 2 or phi2.degree() > 2:
        raise ValueError("projection factors must have degree <= 2")
    return poly_mul(phi1, phi2)
