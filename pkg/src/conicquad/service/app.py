"""HTTP face of the integrator.

Every operation the command line offers is a POST endpoint taking the same
job document (plus per-call options), so the CLI is a thin client: it runs
against an in-process app by default and against a remote server when asked.

Endpoints:

  GET  /health     liveness and version
  POST /integrate  value, piece count, warnings, optional trace
  POST /subdivide  the decomposition drawing as an SVG string
  POST /classify   conic class, parameters, margins, freedom of the triangle
  POST /check      engine vs the adaptive oracle, optional random batch
  POST /selftest   the full acceptance battery

Errors carry {"error_kind": ..., "message": ...} where error_kind is one of
"input", "subdivision", "internal"; clients map those to exit codes.
"""

from __future__ import annotations

import math
import random

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from .. import __version__
from ..acceptance import format_battery, run_battery
from ..conic import normalize_conic
from ..engine import band_halves, integrate_band, integrate_region
from ..geometry import DegenerateTriangle
from ..jobs import JobError, JobInputs, JobModel, job_to_inputs
from ..oracle import scanline_integrate
from ..poly import triangle_integral
from ..random_instances import NONDEGENERATE, random_instance
from ..subdivide import DecompositionTrace, InternalError, SubdivisionFailure, decompose, triangle_freedom
from ..svg import render_subdivision

DEFAULT_CHECK_TOL = 1e-7


class IntegrateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    job: JobModel
    trace: bool = False


class SubdivideRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    job: JobModel


class ClassifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    job: JobModel


class CheckRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    job: JobModel
    tol: float = Field(default=DEFAULT_CHECK_TOL, gt=0.0)
    n: int | None = Field(default=None, ge=1, le=10000)
    seed: int | None = None


class SelftestRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    trig_corruption: float = 0.0
    only: list[str] | None = None


def _trace_payload(trace: DecompositionTrace | None) -> dict | None:
    if trace is None:
        return None
    return {
        "pieces": [
            {
                "triangle": [list(v) for v in p.triangle.vertices],
                "case": p.case.kind.value,
                "provenance": p.provenance,
                "contribution": p.contribution,
            }
            for p in trace.pieces
        ],
        "internal_edges": [[list(a), list(b)] for a, b in trace.internal_edges],
    }


def _integrate_payload(inputs: JobInputs, want_trace: bool) -> dict:
    if inputs.band is not None:
        value = integrate_band(inputs.g, inputs.band, inputs.t)
        f1, f2 = band_halves(inputs.band)
        r1 = integrate_region(inputs.g, f1, inputs.t)
        r2 = integrate_region(inputs.g, f2, inputs.t)
        warnings = list(r1.warnings)
        warnings.extend(w for w in r2.warnings if w not in r1.warnings)
        pieces = sum(len(r.trace.pieces) for r in (r1, r2) if r.trace is not None)
        trace = None
        if want_trace:
            trace = {
                "band_lower": _trace_payload(r1.trace),
                "band_upper": _trace_payload(r2.trace),
            }
        return {
            "value": value,
            "kind": "band",
            "pieces": pieces,
            "degenerate": r1.trace is None and r2.trace is None,
            "warnings": warnings,
            "trace": trace,
        }
    result = integrate_region(inputs.g, inputs.f, inputs.t)
    return {
        "value": result.value,
        "kind": "region",
        "pieces": 0 if result.trace is None else len(result.trace.pieces),
        "degenerate": result.trace is None,
        "warnings": list(result.warnings),
        "trace": _trace_payload(result.trace) if want_trace else None,
    }


def _scanline_job(inputs: JobInputs, tol: float) -> float:
    """High-accuracy scanline value for a job, band or plain region.

    The scanline is the reference for check: unlike the bisection oracle it
    has no certified-bound escape hatch, so an absurd tolerance really does
    fail instead of hiding inside the bound.
    """
    if inputs.band is None:
        return scanline_integrate(inputs.g, inputs.f, inputs.t, tol=tol)
    f1, f2 = band_halves(inputs.band)
    i1 = scanline_integrate(inputs.g, f1, inputs.t, tol=tol)
    i2 = scanline_integrate(inputs.g, f2, inputs.t, tol=tol)
    i_t = triangle_integral(inputs.g, inputs.t)
    return math.fsum((i1, i2, -i_t))


def _gap_ok(engine: float, oracle: float, tol: float) -> bool:
    return abs(engine - oracle) <= tol * max(1.0, abs(oracle))


def create_app() -> FastAPI:
    app = FastAPI(title="conicquad", version=__version__)

    def _error(status: int, kind: str, message: str) -> JSONResponse:
        return JSONResponse(
            status_code=status,
            content={"error_kind": kind, "message": message},
        )

    @app.exception_handler(RequestValidationError)
    async def _on_request_validation(request: Request, exc: RequestValidationError):
        parts = []
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"] if p != "body")
            parts.append(f"{loc}: {err['msg']}")
        return _error(422, "input", "; ".join(parts))

    @app.exception_handler(JobError)
    async def _on_job_error(request: Request, exc: JobError):
        return _error(400, "input", str(exc))

    @app.exception_handler(DegenerateTriangle)
    async def _on_degenerate_triangle(request: Request, exc: DegenerateTriangle):
        return _error(400, "input", str(exc))

    @app.exception_handler(ValueError)
    async def _on_value_error(request: Request, exc: ValueError):
        return _error(400, "input", str(exc))

    @app.exception_handler(OverflowError)
    async def _on_overflow(request: Request, exc: OverflowError):
        return _error(400, "input", "coordinates or coefficients overflow doubles")

    @app.exception_handler(SubdivisionFailure)
    async def _on_subdivision_failure(request: Request, exc: SubdivisionFailure):
        return _error(500, "subdivision", str(exc))

    @app.exception_handler(InternalError)
    async def _on_internal_error(request: Request, exc: InternalError):
        return _error(500, "internal", str(exc))

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/integrate")
    def integrate(req: IntegrateRequest) -> dict:
        return _integrate_payload(job_to_inputs(req.job), req.trace)

    @app.post("/subdivide")
    def subdivide(req: SubdivideRequest) -> dict:
        inputs = job_to_inputs(req.job)
        payload = _integrate_payload(inputs, want_trace=False)
        return {"svg": render_subdivision(inputs), "pieces": payload["pieces"]}

    @app.post("/classify")
    def classify(req: ClassifyRequest) -> dict:
        inputs = job_to_inputs(req.job)
        if inputs.band is not None:
            raise JobError(
                "classify needs a single region polynomial; a band job has two "
                "implicit ones, classify its halves as separate jobs"
            )
        c = normalize_conic(inputs.f)
        status = triangle_freedom(c, inputs.t)
        pieces = None
        if c.is_nondegenerate():
            pieces = len(decompose(c, inputs.t).pieces)
        return {
            "class": c.klass.value,
            "degenerate": not c.is_nondegenerate(),
            "params": c.params,
            "margins": c.margins,
            "freedom": status.freedom.value,
            "case": None if status.case is None else status.case.kind.value,
            "pieces": pieces,
        }

    @app.post("/check")
    def check(req: CheckRequest) -> dict:
        inputs = job_to_inputs(req.job)
        oracle_tol = max(min(0.01 * req.tol, 1e-10), 1e-13)
        engine = _integrate_payload(inputs, want_trace=False)["value"]
        oracle = _scanline_job(inputs, oracle_tol)
        ok = _gap_ok(engine, oracle, req.tol)
        batch = None
        if req.n is not None:
            rng = random.Random(req.seed)
            failures = 0
            worst = 0.0
            for k in range(req.n):
                klass = NONDEGENERATE[k % len(NONDEGENERATE)]
                g, f, t = random_instance(rng, klass)
                v = integrate_region(g, f, t).value
                ref = scanline_integrate(g, f, t, tol=oracle_tol)
                rel = abs(v - ref) / max(1.0, abs(ref))
                worst = max(worst, rel)
                if not _gap_ok(v, ref, req.tol):
                    failures += 1
            batch = {
                "n": req.n,
                "seed": req.seed,
                "failures": failures,
                "worst_rel_gap": worst,
            }
            ok = ok and failures == 0
        return {
            "ok": ok,
            "engine": engine,
            "oracle": oracle,
            "oracle_accuracy": oracle_tol,
            "gap": abs(engine - oracle),
            "rel_gap": abs(engine - oracle) / max(1.0, abs(oracle)),
            "tol": req.tol,
            "batch": batch,
        }

    @app.post("/selftest")
    def selftest(req: SelftestRequest) -> dict:
        only = None if req.only is None else tuple(req.only)
        results = run_battery(trig_corruption=req.trig_corruption, only=only)
        return {
            "ok": all(r.ok for r in results),
            "results": [
                {"name": r.name, "ok": r.ok, "detail": r.detail, "seconds": r.seconds}
                for r in results
            ],
            "table": format_battery(results),
        }

    return app


app = create_app()
