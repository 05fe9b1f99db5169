"""Numeric tolerance knobs.

All comparisons against "zero" in the geometric predicates go through one of
the four epsilons below, always scaled by a magnitude that makes the test
dimensionless (coefficient norms, squared side lengths and so on; the call
sites document the scaling they use). Defaults are deliberate:

* EPS_CLASS: relative threshold for conic classification. Borderline
  discriminants are pushed toward the *degenerate* class, which the
  integrator handles exactly anyway, so misclassifying a razor-thin ellipse
  as parallel lines costs accuracy of order the threshold, not correctness.
* EPS_T: root handling in segment parameter space. Two roots closer than
  this merge into one double root; roots this close to 0 or 1 snap onto the
  vertex.
* EPS_B: half-width of the "on the border" band in the barycentric
  point-in-triangle test.
* EPS_ON: relative threshold for "this point lies on the conic".

Overrides come either from Tolerances(...) passed explicitly or from the
CONIC_QUAD_EPS_OVERRIDES environment variable, a comma-separated list like
"eps_t=1e-8,eps_on=1e-8".
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

EPS_CLASS = 1e-10
EPS_T = 1e-9
EPS_B = 1e-12
EPS_ON = 1e-9

_ENV_VAR = "CONIC_QUAD_EPS_OVERRIDES"


@dataclass(frozen=True)
class Tolerances:
    eps_class: float = EPS_CLASS
    eps_t: float = EPS_T
    eps_b: float = EPS_B
    eps_on: float = EPS_ON

    def with_overrides(self, text: str) -> "Tolerances":
        """Apply overrides from a string like "eps_t=1e-8,eps_on=2e-9"."""
        fields = {}
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            name, _, value = item.partition("=")
            name = name.strip().lower()
            if name not in ("eps_class", "eps_t", "eps_b", "eps_on"):
                raise ValueError(f"unknown tolerance name: {name!r}")
            fields[name] = float(value)
        return replace(self, **fields)


def from_environment() -> Tolerances:
    tol = Tolerances()
    text = os.environ.get(_ENV_VAR, "")
    if text:
        tol = tol.with_overrides(text)
    return tol


_active = from_environment()


def active() -> Tolerances:
    """The process-wide default tolerances."""
    return _active


def set_active(tol: Tolerances) -> None:
    global _active
    _active = tol
