"""Command line entry point: ``tripoly {gen,run,verify,bench,plot}``.

Exit codes: 0 success, 1 I/O or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io as meshio
from .bench import PIPELINES, bench, time_pipeline, warm_up, write_csv
from .errors import MeshError
from .generate import DEFAULT_DELTA, GenSpec, generate
from .mesh import PolyMesh, TriMesh, build_from_triangles
from .pool import default_workers
from .svg import DEFAULT_MAX_ELEMENTS, write_svg
from .validate import canonical, check_polymesh, mesh_stats, pre_repair_blocks, terminal_edge_regions

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; 2 is reserved for failed verification
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", help="mesh file (.node/.ele, .off or .hedump)")
    p.add_argument("--gen", metavar="KIND:N", help="generate the input instead, e.g. grid:10000 or random:2000")
    p.add_argument("--format", choices=("node_ele", "off", "hedump"), help="input format (default: from extension)")
    p.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA, help="border snapping tolerance (default 1e-3)")


def _add_workers(p: argparse.ArgumentParser) -> None:
    p.add_argument("--workers", type=int, default=None,
                   help="parallel worker threads (default: $POLYLLA_WORKERS or CPU count)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tripoly", description="Polygon meshes from triangulations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated triangulation")
    p.add_argument("spec", metavar="KIND:N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--format", choices=("node_ele", "hedump"), default=None,
                   help="output format (default: from extension, .node/.ele or .hedump)")
    p.add_argument("-o", "--output", required=True, help="output path")

    p = sub.add_parser("run", help="convert a triangulation into a polygon mesh")
    _add_source(p)
    p.add_argument("--pipeline", choices=PIPELINES, default="seq")
    _add_workers(p)
    p.add_argument("-o", "--output", help="polygon mesh output (.off)")
    p.add_argument("--hedump", help="also dump the polygon mesh half-edge arrays here")
    p.add_argument("--stats", action="store_true", help="print polygon statistics")

    p = sub.add_parser("verify", help="run both pipelines and all checks")
    _add_source(p)
    _add_workers(p)

    p = sub.add_parser("bench", help="per-phase timing table")
    p.add_argument("--gen", metavar="KIND:N", action="append", required=True,
                   help="input to time; repeat for several sizes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--pipeline", choices=PIPELINES + ("both",), default="both")
    _add_workers(p)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--csv", required=True, help="CSV output path")

    p = sub.add_parser("plot", help="render a mesh as SVG")
    _add_source(p)
    p.add_argument("--pipeline", choices=PIPELINES + ("none",), default="seq",
                   help="convert triangles to polygons first ('none' draws the triangles)")
    _add_workers(p)
    p.add_argument("-o", "--output", required=True, help="SVG output path")
    p.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS)
    return parser


def _workers(args) -> int:
    w = args.workers if args.workers is not None else default_workers()
    if w < 1:
        raise ValueError("--workers must be >= 1")
    return w


def _load(args) -> TriMesh | PolyMesh:
    if (args.input is None) == (args.gen is None):
        raise ValueError("give exactly one of an input file or --gen KIND:N")
    if args.gen is not None:
        spec = GenSpec.parse(args.gen, args.seed, args.delta)
        return build_from_triangles(*generate(spec))
    return meshio.read_mesh(args.input, args.format)


def _trimesh(args) -> TriMesh:
    mesh = _load(args)
    if isinstance(mesh, PolyMesh):
        raise ValueError("input is already a polygon mesh; expected a triangulation")
    return mesh


def _convert(mesh: TriMesh, pipeline: str, workers: int):
    return time_pipeline(mesh, pipeline, workers)


def cmd_gen(args) -> int:
    spec = GenSpec.parse(args.spec, args.seed, args.delta)
    pts, tris = generate(spec)
    fmt = args.format or ("hedump" if Path(args.output).suffix == ".hedump" else "node_ele")
    if fmt == "hedump":
        meshio.write_hedump(build_from_triangles(pts, tris), args.output)
    else:
        meshio.write_node_ele(pts, tris, Path(args.output).with_suffix(".node"))
    print(f"{spec.label()}: {len(pts)} points, {len(tris)} triangles")
    return EXIT_OK


def cmd_run(args) -> int:
    mesh = _trimesh(args)
    warm_up()
    timings, out = _convert(mesh, args.pipeline, _workers(args) if args.pipeline == "par" else 1)
    if args.output:
        meshio.write_poly_off(out, args.output)
    if args.hedump:
        meshio.write_hedump(out, args.hedump)
    print(f"polygons={out.n_polygons} repaired={timings.values.get('repaired', 0)}"
          if args.pipeline == "seq" else f"polygons={out.n_polygons}")
    print(timings.to_text())
    if args.stats:
        print(mesh_stats(out).to_kv())
    return EXIT_OK


def verify_mesh(mesh: TriMesh, workers: int = 1) -> tuple[bool, list[str]]:
    """Run both pipelines and the oracles; returns ``(ok, report lines)``."""
    from .parallel import run_parallel
    from .sequential import run_sequential

    seq = run_sequential(mesh, trace=True)
    par = run_parallel(mesh, workers=workers)
    regions = terminal_edge_regions(mesh)
    rep_seq = check_polymesh(seq, mesh, regions)
    rep_par = check_polymesh(par, mesh, regions)
    same = canonical(seq) == canonical(par)
    blocks, problems = pre_repair_blocks(seq, mesh)
    oracle = not problems and blocks == regions.blocks()

    lines = [rep_seq.to_text()]
    lines.append(f"  repaired polygons: {int(seq.trace['broken'].sum())}")
    lines.append(f"  terminal-edge regions: {regions.n_regions}")
    lines.append(f"  pre-repair partition matches regions: {'yes' if oracle else 'no'}")
    lines.append(f"  parallel check: {'PASS' if rep_par.ok else 'FAIL'}")
    lines.append(f"  sequential and parallel outputs identical: {'yes' if same else 'no'}")
    ok = rep_seq.ok and rep_par.ok and same and oracle
    lines.append(f"verify: {'PASS' if ok else 'FAIL'}")
    return ok, lines


def cmd_verify(args) -> int:
    mesh = _trimesh(args)
    ok, lines = verify_mesh(mesh, _workers(args))
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_bench(args) -> int:
    specs = [GenSpec.parse(g, args.seed, args.delta) for g in args.gen]
    pipelines = PIPELINES if args.pipeline == "both" else (args.pipeline,)
    rows = bench(specs, pipelines, _workers(args), args.repetitions, progress=print)
    write_csv(rows, args.csv)
    print(f"wrote {len(rows)} rows to {args.csv}")
    return EXIT_OK


def cmd_plot(args) -> int:
    mesh = _load(args)
    if isinstance(mesh, TriMesh) and args.pipeline != "none":
        _, mesh = _convert(mesh, args.pipeline, _workers(args) if args.pipeline == "par" else 1)
    write_svg(mesh, args.output, args.max_elements)
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "verify": cmd_verify, "bench": cmd_bench, "plot": cmd_plot}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (MeshError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
