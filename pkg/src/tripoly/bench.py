"""Per-phase timing harness.

One CSV row per (input, pipeline, repetition) followed by one median row
per (input, pipeline). Times are milliseconds with microsecond precision.
Sequential rows leave the kernel columns empty and parallel rows leave the
phase columns empty. ``Total`` excludes the simulated copies ``CtD`` and
``BtH``; ``TwC`` includes them (equal to ``Total`` for sequential rows).
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass, field

from .generate import GenSpec, generate
from .mesh import build_from_triangles
from .parallel import run_parallel
from .sequential import run_sequential

KEY_COLUMNS = ("kind", "n_points", "pipeline", "workers", "rep")
SEQ_COLUMNS = ("LM", "LF", "LS", "Trav", "Rep")
PAR_COLUMNS = ("CtD", "LLK", "LFK", "LSK", "LEK", "CaK", "SFK", "BtH", "OSK", "Scan")
TOTAL_COLUMNS = ("TwC", "Total")
CSV_COLUMNS = KEY_COLUMNS + SEQ_COLUMNS + PAR_COLUMNS + TOTAL_COLUMNS
TIME_COLUMNS = SEQ_COLUMNS + PAR_COLUMNS + TOTAL_COLUMNS

PIPELINES = ("seq", "par")


@dataclass
class PhaseTimings:
    pipeline: str
    values: dict = field(default_factory=dict)

    def columns(self) -> tuple[str, ...]:
        own = SEQ_COLUMNS if self.pipeline == "seq" else PAR_COLUMNS
        return own + TOTAL_COLUMNS

    def row(self) -> dict:
        return {c: f"{self.values[c]:.3f}" for c in self.columns()}

    def to_text(self) -> str:
        return " ".join(f"{c}={self.values[c]:.3f}" for c in self.columns()) + " (ms)"


def time_pipeline(mesh, pipeline: str, workers: int = 1) -> tuple[PhaseTimings, object]:
    t: dict = {}
    if pipeline == "seq":
        out = run_sequential(mesh, timings=t)
        t["Total"] = sum(t[c] for c in SEQ_COLUMNS)
        t["TwC"] = t["Total"]
    elif pipeline == "par":
        out = run_parallel(mesh, workers=workers, timings=t)
    else:
        raise ValueError(f"unknown pipeline {pipeline!r}")
    return PhaseTimings(pipeline, t), out


def warm_up() -> None:
    """Compile every kernel on a tiny mesh so the first timed run is not a JIT run."""
    mesh = build_from_triangles(*generate(GenSpec("random", 30, 1)))
    for p in PIPELINES:
        time_pipeline(mesh, p, 2)


def bench(specs, pipelines=PIPELINES, workers: int = 1, repetitions: int = 3, progress=None) -> list[dict]:
    """Rows (as dicts of strings) for every spec, pipeline and repetition plus medians."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    warm_up()
    rows = []
    for spec in specs:
        mesh = build_from_triangles(*generate(spec))
        for p in pipelines:
            w = workers if p == "par" else 1
            runs = []
            for r in range(repetitions):
                t, _ = time_pipeline(mesh, p, w)
                runs.append(t)
                rows.append({**_key(spec, p, w, r), **t.row()})
                if progress:
                    progress(f"{spec.label()} {p} rep={r} {t.to_text()}")
            med = {c: statistics.median(t.values[c] for t in runs) for c in runs[0].columns()}
            rows.append({**_key(spec, p, w, "median"), **PhaseTimings(p, med).row()})
    return rows


def _key(spec, pipeline, workers, rep) -> dict:
    return dict(kind=spec.kind, n_points=spec.n_points, pipeline=pipeline, workers=workers, rep=rep)


def write_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, restval="")
        w.writeheader()
        w.writerows(rows)


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def medians(rows) -> dict:
    """``{(kind, n_points, pipeline, workers): {column: float}}`` from the median rows."""
    out = {}
    for r in rows:
        if r["rep"] != "median":
            continue
        key = (r["kind"], int(r["n_points"]), r["pipeline"], int(r["workers"]))
        out[key] = {c: float(r[c]) for c in TIME_COLUMNS if r.get(c) not in (None, "")}
    return out
