"""Job files: the JSON documents the CLI and service consume.

A job names a triangle, a region, and an integrand:

    {
      "triangle": [[-3, -3], [3, -3], [0, 4]],
      "f": {"a20": -1, "a02": -1, "a00": 1},
      "g": [[0, 0, 1.0]]
    }

The region is {f >= 0} with f = a20 x^2 + a11 xy + a02 y^2 + a10 x +
a01 y + a00. The integrand comes in exactly one of three shapes: "g" as a
list of [i, j, coeff] monomial triples, "phi1"/"phi2" as two quadratic
coefficient sets whose product is the integrand, or "band" for level-band
regions {fa <= -p/alpha <= fb} (which replaces "f"; the integrand is the
optional "v" triple list inside the band, constant 1 when omitted).

Numbers are plain JSON decimals and survive a parse/dump round trip
bit-exactly; unknown fields are rejected so a typo fails loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .engine import BandSpec
from .geometry import Triangle
from .poly import MAX_INTEGRAND_DEGREE, Polynomial2

FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]

# [i, j, coeff] monomial triples for integrands
Triple = tuple[int, int, FiniteFloat]


class JobError(ValueError):
    """A job file failed to parse or validate; the message says where."""


class QuadCoeffs(BaseModel):
    """Named coefficients of a quadratic, all defaulting to zero."""

    model_config = ConfigDict(extra="forbid")

    a20: FiniteFloat = 0.0
    a11: FiniteFloat = 0.0
    a02: FiniteFloat = 0.0
    a10: FiniteFloat = 0.0
    a01: FiniteFloat = 0.0
    a00: FiniteFloat = 0.0

    def to_poly(self) -> Polynomial2:
        return Polynomial2(
            {
                (2, 0): self.a20,
                (1, 1): self.a11,
                (0, 2): self.a02,
                (1, 0): self.a10,
                (0, 1): self.a01,
                (0, 0): self.a00,
            }
        )


def _triples_to_poly(triples: list[Triple], cap: int, what: str) -> Polynomial2:
    coeffs: dict[tuple[int, int], float] = {}
    for i, j, b in triples:
        if i < 0 or j < 0:
            raise JobError(f"{what}: exponents must be nonnegative, got ({i}, {j})")
        if i + j > cap:
            raise JobError(f"{what}: monomial x^{i} y^{j} exceeds degree {cap}")
        coeffs[(i, j)] = coeffs.get((i, j), 0.0) + b
    return Polynomial2(coeffs)


class BandModel(BaseModel):
    """The level-band region {fa <= -p/alpha <= fb}."""

    model_config = ConfigDict(extra="forbid")

    p: QuadCoeffs
    alpha: FiniteFloat
    fa: FiniteFloat
    fb: FiniteFloat
    v: list[Triple] | None = None


class JobModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    triangle: tuple[
        tuple[FiniteFloat, FiniteFloat],
        tuple[FiniteFloat, FiniteFloat],
        tuple[FiniteFloat, FiniteFloat],
    ]
    f: QuadCoeffs | None = None
    g: list[Triple] | None = None
    phi1: QuadCoeffs | None = None
    phi2: QuadCoeffs | None = None
    band: BandModel | None = None

    @model_validator(mode="after")
    def _exactly_one_integrand(self) -> "JobModel":
        has_g = self.g is not None
        has_phis = self.phi1 is not None or self.phi2 is not None
        has_band = self.band is not None
        if has_phis and (self.phi1 is None or self.phi2 is None):
            raise ValueError("phi1 and phi2 must be given together")
        if sum((has_g, has_phis, has_band)) != 1:
            raise ValueError("exactly one of g, phi1/phi2, or band must be present")
        if has_band and self.f is not None:
            raise ValueError("a band job carries its region in band.p; drop f")
        if not has_band and self.f is None:
            raise ValueError("f is required unless the job is a band job")
        return self


@dataclass(frozen=True)
class JobInputs:
    """A job translated into engine types. band is None for plain jobs,
    and f is None for band jobs."""

    g: Polynomial2
    f: Polynomial2 | None
    t: Triangle
    band: BandSpec | None


def job_to_inputs(job: JobModel) -> JobInputs:
    t = Triangle(*(tuple(map(float, v)) for v in job.triangle))
    if job.band is not None:
        b = job.band
        if b.v is not None:
            g = _triples_to_poly(b.v, MAX_INTEGRAND_DEGREE, "band.v")
        else:
            g = Polynomial2.constant(1.0)
        band = BandSpec(b.p.to_poly(), float(b.alpha), float(b.fa), float(b.fb))
        try:
            band.validate()
        except ValueError as e:
            raise JobError(str(e)) from e
        return JobInputs(g, None, t, band)
    if job.g is not None:
        g = _triples_to_poly(job.g, MAX_INTEGRAND_DEGREE, "g")
    else:
        p1 = job.phi1.to_poly()
        p2 = job.phi2.to_poly()
        g = p1 * p2
    return JobInputs(g, job.f.to_poly(), t, None)


def parse_job(text: str) -> JobModel:
    try:
        raw = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise JobError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    except ValueError as e:
        raise JobError(str(e)) from e
    try:
        return JobModel.model_validate(raw)
    except ValidationError as e:
        parts = []
        for err in e.errors():
            loc = ".".join(str(p) for p in err["loc"]) or "<document>"
            parts.append(f"{loc}: {err['msg']}")
        raise JobError("; ".join(parts)) from e


def _reject_constant(name: str) -> float:
    raise ValueError(f"non-finite literal {name} is not allowed in job files")


def load_job(path: str) -> JobModel:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise JobError(f"cannot read job file {path}: {e.strerror}") from e
    try:
        return parse_job(text)
    except JobError as e:
        raise JobError(f"{path}: {e}") from e


def canonical_json(job: JobModel) -> str:
    """Stable, hand-editable rendering that re-parses to the same job."""
    data = job.model_dump(exclude_none=True)
    return json.dumps(data, indent=2, allow_nan=False) + "\n"
