"""Command line driver.

Thin client over the HTTP service: by default it spins the app up
in-process, with --server it talks to a running instance instead, so the
output of both modes is identical byte for byte.

Exit codes: 0 ok, 1 check or selftest failed, 2 input error, 3 internal
or subdivision failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings

from .jobs import JobError, canonical_json, load_job

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3

_ERROR_EXITS = {"input": EXIT_INPUT, "subdivision": EXIT_INTERNAL, "internal": EXIT_INTERNAL}


class ServiceClient:
    """POSTs to the in-process app, or to a remote server when given a URL."""

    def __init__(self, server: str | None):
        if server is None:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

                from .service import create_app

                self._client = TestClient(create_app())
        else:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)

    def post(self, path: str, payload: dict) -> tuple[int, dict]:
        r = self._client.post(path, json=payload)
        try:
            body = r.json()
        except ValueError:
            body = {"error_kind": "internal", "message": r.text.strip()}
        return r.status_code, body


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _fmt_value(v) -> str:
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_fmt_value(item) for item in v) + ")"
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def _fail(status: int, body: dict) -> int:
    kind = body.get("error_kind", "internal")
    message = body.get("message", f"HTTP {status}")
    print(f"error ({kind}): {message}", file=sys.stderr)
    return _ERROR_EXITS.get(kind, EXIT_INTERNAL)


def _load_payload(path: str) -> dict:
    model = load_job(path)
    return json.loads(canonical_json(model))


def _print_trace_section(trace: dict, header: str | None) -> None:
    if header is not None:
        print(f"{header}:")
    indent = "  " if header is not None else ""
    if trace is None:
        print(f"{indent}degenerate region, no decomposition")
        return
    print(f"{indent}piece  case             contribution")
    for idx, piece in enumerate(trace["pieces"]):
        print(f"{indent}{idx:<5d}  {piece['case']:<15s}  {_fmt(piece['contribution'])}")
    print(f"{indent}internal edges: {len(trace['internal_edges'])}")


def cmd_integrate(args: argparse.Namespace) -> int:
    model = load_job(args.job)
    if args.dump_job:
        sys.stdout.write(canonical_json(model))
        return EXIT_OK
    start = time.perf_counter()
    status, body = ServiceClient(args.server).post(
        "/integrate", {"job": json.loads(canonical_json(model)), "trace": args.trace}
    )
    if status != 200:
        return _fail(status, body)
    print(f"value = {_fmt(body['value'])}")
    suffix = " (degenerate region)" if body["degenerate"] else ""
    print(f"pieces = {body['pieces']}{suffix}")
    for w in body["warnings"]:
        print(f"warning: {w}")
    if args.trace:
        trace = body["trace"]
        if body["kind"] == "band":
            _print_trace_section(trace["band_lower"], "band-lower")
            _print_trace_section(trace["band_upper"], "band-upper")
        else:
            _print_trace_section(trace, None)
    if args.timing:
        print(f"time: {(time.perf_counter() - start) * 1e3:.1f} ms")
    return EXIT_OK


def cmd_subdivide(args: argparse.Namespace) -> int:
    status, body = ServiceClient(args.server).post(
        "/subdivide", {"job": _load_payload(args.job)}
    )
    if status != 200:
        return _fail(status, body)
    try:
        with open(args.svg, "w") as fh:
            fh.write(body["svg"])
    except OSError as exc:
        print(f"error (input): cannot write {args.svg}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"wrote {args.svg} ({body['pieces']} pieces)")
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    status, body = ServiceClient(args.server).post(
        "/classify", {"job": _load_payload(args.job)}
    )
    if status != 200:
        return _fail(status, body)
    print(f"class = {body['class']}")
    print(f"degenerate = {'yes' if body['degenerate'] else 'no'}")
    print(f"freedom = {body['freedom']}")
    print(f"case = {body['case'] if body['case'] is not None else '-'}")
    if body["pieces"] is not None:
        print(f"pieces = {body['pieces']}")
    for name in sorted(body["params"]):
        print(f"param {name} = {_fmt_value(body['params'][name])}")
    for name in sorted(body["margins"]):
        print(f"margin {name} = {_fmt_value(body['margins'][name])}")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    payload: dict = {"job": _load_payload(args.job), "tol": args.tol}
    if args.n is not None:
        payload["n"] = args.n
        payload["seed"] = args.seed
    status, body = ServiceClient(args.server).post("/check", payload)
    if status != 200:
        return _fail(status, body)
    print(f"engine = {_fmt(body['engine'])}")
    print(f"oracle = {_fmt(body['oracle'])} +- {body['oracle_accuracy']:.0e}")
    print(f"gap = {_fmt(body['gap'])} (relative {_fmt(body['rel_gap'])})")
    if body["batch"] is not None:
        b = body["batch"]
        print(
            f"batch = {b['n']} random jobs, {b['failures']} failures, "
            f"worst relative gap {_fmt(b['worst_rel_gap'])}"
        )
    verdict = "PASSED" if body["ok"] else "FAILED"
    print(f"check {verdict} (tol {args.tol:g})")
    return EXIT_OK if body["ok"] else EXIT_CHECK_FAILED


def cmd_selftest(args: argparse.Namespace) -> int:
    payload: dict = {"trig_corruption": args.inject_trig_corruption}
    if args.only:
        payload["only"] = args.only
    status, body = ServiceClient(args.server).post("/selftest", payload)
    if status != 200:
        return _fail(status, body)
    print(body["table"])
    return EXIT_OK if body["ok"] else EXIT_CHECK_FAILED


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conicquad",
        description="Exact integrals of quartics over conic sections of a triangle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_server(p: argparse.ArgumentParser) -> None:
        p.add_argument("--server", default=None, metavar="URL",
                       help="POST to a running server instead of in-process")

    p = sub.add_parser("integrate", help="print the integral for a job file")
    p.add_argument("job")
    p.add_argument("--trace", action="store_true", help="print the per-piece table")
    p.add_argument("--dump-job", action="store_true",
                   help="echo the job in canonical form and exit")
    p.add_argument("--timing", action="store_true", help="append a wall-time line")
    add_server(p)
    p.set_defaults(fn=cmd_integrate)

    p = sub.add_parser("subdivide", help="write the decomposition drawing as SVG")
    p.add_argument("job")
    p.add_argument("--svg", required=True, metavar="PATH")
    add_server(p)
    p.set_defaults(fn=cmd_subdivide)

    p = sub.add_parser("classify", help="print the conic class and freedom report")
    p.add_argument("job")
    add_server(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("check", help="compare the engine against the oracle")
    p.add_argument("job")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--n", type=int, default=None,
                   help="also check this many seeded random jobs")
    p.add_argument("--seed", type=int, default=None)
    add_server(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("selftest", help="run the acceptance battery")
    p.add_argument("--inject-trig-corruption", type=float, default=0.0,
                   metavar="AMOUNT", help="debug hook: perturb the trig tables")
    p.add_argument("--only", action="append", default=None, metavar="NAME",
                   help="debug filter: run only the named checks (repeatable)")
    add_server(p)
    p.set_defaults(fn=cmd_selftest)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except JobError as exc:
        print(f"error (input): {exc}", file=sys.stderr)
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
