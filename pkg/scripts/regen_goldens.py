#!/usr/bin/env python3
"""Regenerate the golden SVG files for the canonical jobs.

Run from the repository root after an intentional renderer change:

    python3 scripts/regen_goldens.py

The selftest compares renders byte-for-byte against these files, so only
regenerate when the new output has been inspected and is the new truth.
"""

from __future__ import annotations

import pathlib

from conicquad.jobs import job_to_inputs, load_job
from conicquad.svg import render_subdivision

DATA = pathlib.Path(__file__).resolve().parent.parent / "src" / "conicquad" / "data"


def main() -> None:
    for job_path in sorted((DATA / "jobs").glob("*.json")):
        inputs = job_to_inputs(load_job(str(job_path)))
        svg = render_subdivision(inputs)
        out = DATA / "goldens" / (job_path.stem + ".svg")
        out.write_text(svg)
        print(f"wrote {out.relative_to(DATA.parent.parent.parent)} ({len(svg)} bytes)")


if __name__ == "__main__":
    main()
