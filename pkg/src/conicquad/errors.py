"""Exception types shared across the package."""

from __future__ import annotations


class DegenerateTriangle(ValueError):
    """Raised when a triangle has (numerically) zero area."""


class SubdivisionFailure(RuntimeError):
    """Raised when the subdivision routine cannot certify a piece as free.

    This is surfaced to the caller instead of silently falling back to a
    numeric method, so a failure here always means either a genuinely
    pathological input or a bug worth looking at.
    """


class NoTangencyCandidate(SubdivisionFailure):
    """No usable interior tangency point was found during a vertex split."""


class InternalError(RuntimeError):
    """An invariant the code relies on was violated. Always a bug."""
