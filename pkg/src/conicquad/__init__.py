"""conicquad: exact integration of polynomials over triangle-and-conic regions.

The core entry point is integrate_region(g, f, t): the integral of a
polynomial g (degree up to 4) over the part of triangle t where the
quadratic f is nonnegative, computed in closed form. See engine.py for the
orchestration, subdivide.py for the geometric decomposition and basecase.py
for the per-piece formulas. oracle.py holds two independent numeric checks.
"""

from __future__ import annotations

from .basecase import (
    ChordRegion,
    EllipsePosition,
    circle_segment_integral,
    degenerate_integral,
    ellipse_interior_integral,
    ellipse_triangle_position,
    hyperbola_chord_integral,
    integrate_free_triangle,
    parabola_chord_integral,
    set_trig_table_corruption,
    trig_moment,
)
from .conic import Conic, ConicClass, conic_classify, normalize_conic
from .engine import (
    BandSpec,
    IntegralResult,
    band_halves,
    integrate_band,
    integrate_region,
    projection_integrand,
)
from .errors import (
    DegenerateTriangle,
    InternalError,
    NoTangencyCandidate,
    SubdivisionFailure,
)
from .geometry import AffineMap2, Point, Triangle
from .jobs import (
    JobError,
    JobInputs,
    JobModel,
    canonical_json,
    job_to_inputs,
    load_job,
    parse_job,
)
from .poly import Polynomial2, reference_triangle_integral, triangle_integral
from .subdivide import DecompositionTrace, FreeCase, Freedom, FreeStatus, decompose
from .svg import render_subdivision
from .tolerances import Tolerances

__version__ = "0.1.0"

__all__ = [
    "AffineMap2",
    "BandSpec",
    "ChordRegion",
    "Conic",
    "ConicClass",
    "DecompositionTrace",
    "DegenerateTriangle",
    "EllipsePosition",
    "FreeCase",
    "FreeStatus",
    "Freedom",
    "IntegralResult",
    "InternalError",
    "JobError",
    "JobInputs",
    "JobModel",
    "NoTangencyCandidate",
    "Point",
    "Polynomial2",
    "SubdivisionFailure",
    "Tolerances",
    "Triangle",
    "band_halves",
    "canonical_json",
    "circle_segment_integral",
    "conic_classify",
    "decompose",
    "degenerate_integral",
    "ellipse_interior_integral",
    "ellipse_triangle_position",
    "hyperbola_chord_integral",
    "integrate_band",
    "integrate_free_triangle",
    "integrate_region",
    "job_to_inputs",
    "load_job",
    "normalize_conic",
    "parabola_chord_integral",
    "parse_job",
    "projection_integrand",
    "reference_triangle_integral",
    "render_subdivision",
    "set_trig_table_corruption",
    "triangle_integral",
    "trig_moment",
    "__version__",
]
