"""End-to-end acceptance battery behind the selftest command.

Eight independent checks, each probing a different layer of the pipeline:

  1. reference-exactness       closed-form reference-triangle weights
  2. analytic-regions          canonical jobs with known analytic values
  3. complement-identity       {f >= 0} plus {-f >= 0} tiles the triangle
  4. oracle-agreement          engine vs the certified adaptive oracle
  5. subdivision-certificates  piece counts, freedom recounts, tiling defect
  6. rigid-equivariance        invariance under rotations and translations
  7. degenerate-battery        line-pair and strip regions vs the scanline
  8. svg-goldens               renderer output is byte-identical to goldens

Every check uses a fixed seed, so two runs on the same build produce the
same table. `run_battery` returns structured results; `format_battery`
renders the pass/fail table the CLI prints.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .basecase import set_trig_table_corruption
from .conic import normalize_conic
from .engine import integrate_band, integrate_region
from .geometry import Triangle
from .jobs import job_to_inputs, parse_job
from .oracle import oracle_integrate, scanline_integrate
from .poly import Polynomial2, reference_triangle_integral, triangle_integral
from .random_instances import (
    ALL_CLASSES,
    NONDEGENERATE,
    random_instance,
    random_rigid,
)
from .subdivide import Freedom, MAX_PIECES, decompose, segment_is_free, triangle_freedom
from .svg import render_subdivision

CANONICAL_JOBS = ("disc", "half_disc", "segment", "annulus_band", "crossing_lines")

# Each analytic job with its exact value and the tolerance it must meet.
ANALYTIC_TARGETS = (
    ("disc", math.pi, 1e-10),
    ("half_disc", math.pi / 2.0, 1e-10),
    ("segment", math.pi / 4.0 - 0.5, 1e-10),
    ("annulus_band", 3.0 * math.pi, 1e-9),
)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def _job_text(name: str) -> str:
    return (resources.files("conicquad") / "data" / "jobs" / f"{name}.json").read_text()


def _golden_text(name: str) -> str:
    return (resources.files("conicquad") / "data" / "goldens" / f"{name}.svg").read_text()


def _run_job(name: str) -> float:
    inputs = job_to_inputs(parse_job(_job_text(name)))
    if inputs.band is not None:
        return integrate_band(inputs.g, inputs.band, inputs.t)
    return integrate_region(inputs.g, inputs.f, inputs.t).value


def check_reference_exactness(n_random: int = 1000, seed: int = 31415) -> tuple[bool, str]:
    """Reference-triangle weights are exact, and match rational arithmetic."""
    eps = 2.0 * math.ulp(1.0)
    worst_mono = 0.0
    for i in range(5):
        for j in range(5 - i):
            got = reference_triangle_integral(Polynomial2({(i, j): 1.0}))
            want = 1.0 / ((j + 1) * (i + j + 2))
            worst_mono = max(worst_mono, abs(got - want) / want)
    if worst_mono > eps:
        return False, f"monomial weight off by {worst_mono:.3g} relative"

    rng = random.Random(seed)
    worst = 0.0
    for _ in range(n_random):
        coeffs = {
            (i, j): rng.uniform(-1.0, 1.0)
            for i in range(5)
            for j in range(5 - i)
        }
        got = reference_triangle_integral(Polynomial2(coeffs))
        exact = sum(
            Fraction(v) / ((j + 1) * (i + j + 2)) for (i, j), v in coeffs.items()
        )
        denom = max(abs(exact), Fraction(1, 10**300))
        worst = max(worst, abs(Fraction(got) - exact) / denom)
    ok = worst <= 1e-15
    return ok, (
        f"monomials exact to {worst_mono:.2e}; "
        f"worst of {n_random} random quartics {float(worst):.2e} relative"
    )


def check_analytic_regions() -> tuple[bool, str]:
    """Canonical jobs reproduce their known closed-form values."""
    parts = []
    ok = True
    for name, want, tol in ANALYTIC_TARGETS:
        got = _run_job(name)
        err = abs(got - want)
        if err > tol:
            ok = False
        parts.append(f"{name} off by {err:.2e}")
    return ok, "; ".join(parts)


def check_complement_identity(n: int = 500, seed: int = 2718) -> tuple[bool, str]:
    """Integrals over {f >= 0} and {-f >= 0} sum to the triangle integral."""
    rng = random.Random(seed)
    worst = 0.0
    for k in range(n):
        klass = ALL_CLASSES[k % len(ALL_CLASSES)]
        g, f, t = random_instance(rng, klass)
        a = integrate_region(g, f, t).value
        b = integrate_region(g, -f, t).value
        total = triangle_integral(g, t)
        defect = abs(a + b - total) / max(abs(total), 1.0)
        worst = max(worst, defect)
    ok = worst <= 1e-10
    return ok, f"worst tiling defect {worst:.2e} over {n} stratified instances"


def check_oracle_agreement(
    n: int = 200, seed: int = 1618, oracle_tol: float = 1e-8
) -> tuple[bool, str]:
    """Engine values agree with the certified adaptive oracle."""
    rng = random.Random(seed)
    worst = 0.0
    misses = 0
    for k in range(n):
        klass = NONDEGENERATE[k % len(NONDEGENERATE)]
        g, f, t = random_instance(rng, klass)
        v = integrate_region(g, f, t).value
        est = oracle_integrate(g, f, t, tol=oracle_tol)
        gap = abs(v - est.value)
        rel = gap / max(1.0, abs(est.value))
        if rel > 1e-7 and gap > est.error_bound:
            misses += 1
        worst = max(worst, rel)
    ok = misses == 0
    return ok, f"{misses} of {n} outside both 1e-7 relative and the oracle bound; worst rel {worst:.2e}"


def check_subdivision_certificates(n: int = 300, seed: int = 6283) -> tuple[bool, str]:
    """Every decomposition is a small, free, exactly tiling set of pieces."""
    rng = random.Random(seed)
    max_pieces = 0
    worst_defect = 0.0
    for k in range(n):
        klass = NONDEGENERATE[k % len(NONDEGENERATE)]
        _, f, t = random_instance(rng, klass)
        c = normalize_conic(f)
        trace = decompose(c, t)
        max_pieces = max(max_pieces, len(trace.pieces))
        if len(trace.pieces) > MAX_PIECES:
            return False, f"instance {k}: {len(trace.pieces)} pieces"
        for piece in trace.pieces:
            status = triangle_freedom(c, piece.triangle)
            if status.freedom is not Freedom.FREE:
                return False, f"instance {k}: piece recount {status.freedom.value}"
        area = math.fsum(p.triangle.area for p in trace.pieces)
        defect = abs(area - t.area) / t.area
        worst_defect = max(worst_defect, defect)
        if defect > 1e-12:
            return False, f"instance {k}: tiling defect {defect:.2e}"
        for seg in trace.internal_edges:
            if not segment_is_free(c, seg):
                return False, f"instance {k}: internal edge not free"
    return True, (
        f"{n} instances, at most {max_pieces} pieces, "
        f"worst tiling defect {worst_defect:.2e}"
    )


def check_rigid_equivariance(
    n: int = 100, motions: int = 5, seed: int = 1414
) -> tuple[bool, str]:
    """Values are unchanged under rotations and translations of the scene."""
    rng = random.Random(seed)
    worst = 0.0
    for k in range(n):
        klass = ALL_CLASSES[k % len(ALL_CLASSES)]
        g, f, t = random_instance(rng, klass)
        base = integrate_region(g, f, t).value
        scale = max(1.0, abs(base))
        for _ in range(motions):
            m = random_rigid(rng)
            inv = m.inverse()
            t2 = Triangle(*(m(v) for v in t.vertices))
            moved = integrate_region(g.compose(inv), f.compose(inv), t2).value
            worst = max(worst, abs(moved - base) / scale)
    ok = worst <= 1e-9
    return ok, f"worst drift {worst:.2e} over {n} instances x {motions} motions"


def _degenerate_cases() -> list[tuple[str, Polynomial2, Polynomial2, Triangle]]:
    x = Polynomial2({(1, 0): 1.0})
    y = Polynomial2({(0, 1): 1.0})
    one = Polynomial2.constant(1.0)
    wide = Triangle((-3.0, -2.0), (3.0, -2.0), (0.0, 5.0))
    skew = Triangle((-2.0, -2.0), (4.0, -1.0), (-1.0, 3.0))
    return [
        ("strip across", one + x * y, one - x * x, wide),
        ("triangle inside strip", one + x, one - x * x,
         Triangle((-0.5, 0.0), (0.5, 0.0), (0.0, 0.8))),
        ("outside strip", x + y * y, x * x - one, wide),
        ("crossing at interior point", one, x * y, skew),
        ("crossing, complementary pair", one + x * x, -(x * y), skew),
        ("crossing at a vertex", one + x, x * (x + y - Polynomial2.constant(2.0)),
         Triangle((0.0, 0.0), (2.0, 0.0), (0.0, 2.0))),
        ("crossing clips a corner", x + y,
         (one - x) * (one - y), Triangle((0.0, 0.0), (3.0, 0.0), (0.0, 3.0))),
    ]


def check_degenerate_battery() -> tuple[bool, str]:
    """Hand-built strip and line-pair regions agree with the scanline."""
    worst = 0.0
    for name, g, f, t in _degenerate_cases():
        got = integrate_region(g, f, t).value
        want = scanline_integrate(g, f, t, tol=1e-10)
        rel = abs(got - want) / max(1.0, abs(want))
        worst = max(worst, rel)
        if rel > 1e-8:
            return False, f"{name}: off by {rel:.2e} relative"
    return True, f"7 layouts, worst gap {worst:.2e} relative"


def check_svg_goldens() -> tuple[bool, str]:
    """Rendering the canonical jobs reproduces the checked-in files."""
    stale = []
    for name in CANONICAL_JOBS:
        inputs = job_to_inputs(parse_job(_job_text(name)))
        got = render_subdivision(inputs)
        if got != _golden_text(name):
            stale.append(name)
    if stale:
        return False, "differs from golden: " + ", ".join(stale)
    return True, f"{len(CANONICAL_JOBS)} renders byte-identical"


BATTERY = (
    ("reference-exactness", check_reference_exactness),
    ("analytic-regions", check_analytic_regions),
    ("complement-identity", check_complement_identity),
    ("oracle-agreement", check_oracle_agreement),
    ("subdivision-certificates", check_subdivision_certificates),
    ("rigid-equivariance", check_rigid_equivariance),
    ("degenerate-battery", check_degenerate_battery),
    ("svg-goldens", check_svg_goldens),
)


def run_battery(
    trig_corruption: float = 0.0,
    only: tuple[str, ...] | None = None,
) -> list[CriterionResult]:
    """Run all eight checks and return their results in order.

    trig_corruption perturbs the trigonometric moment tables before the run
    (and restores them after). It exists to demonstrate that the battery
    actually detects a broken build; any nonzero amount should turn several
    rows red. only restricts the run to the named checks, for quick probes.
    """
    if only is not None:
        known = {name for name, _ in BATTERY}
        bad = [name for name in only if name not in known]
        if bad:
            raise ValueError(f"unknown battery check(s): {', '.join(bad)}")
    results = []
    set_trig_table_corruption(trig_corruption)
    try:
        for name, fn in BATTERY:
            if only is not None and name not in only:
                continue
            start = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as exc:  # a crash is a failing row, not a crash
                ok, detail = False, f"raised {type(exc).__name__}: {exc}"
            results.append(CriterionResult(name, ok, detail, time.perf_counter() - start))
    finally:
        set_trig_table_corruption(0.0)
    return results


def format_battery(results: list[CriterionResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        verdict = "PASS" if r.ok else "FAIL"
        lines.append(f"{verdict}  {r.name:<{width}}  {r.seconds:7.2f}s  {r.detail}")
    n_ok = sum(r.ok for r in results)
    lines.append(f"{n_ok}/{len(results)} checks passed")
    return "\n".join(lines)
