import csv

import pytest

from conftest import grid_mesh, random_mesh
from tripoly.bench import CSV_COLUMNS, bench, medians, read_csv, write_csv
from tripoly.errors import TooLarge
from tripoly.generate import GenSpec
from tripoly.sequential import run_sequential
from tripoly.svg import render_svg

GOLDEN_HEADER = (
    "kind,n_points,pipeline,workers,rep,LM,LF,LS,Trav,Rep,"
    "CtD,LLK,LFK,LSK,LEK,CaK,SFK,BtH,OSK,Scan,TwC,Total"
)


def test_svg_square(square):
    text = render_svg(run_sequential(square))
    assert text.count("<polygon") == 1
    assert 'data-arity="4"' in text
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")


def test_svg_grid_and_random():
    text = render_svg(run_sequential(grid_mesh(400)))
    assert text.count("<polygon") == 361
    out = run_sequential(random_mesh(500, seed=1))
    text = render_svg(out)
    assert text.count("<polygon") == out.n_polygons
    arities = {int(s.split('"')[1]) for s in text.split("data-arity=")[1:]}
    assert len(arities) > 1


def test_svg_deterministic_and_triangles(square):
    assert render_svg(square) == render_svg(square)
    assert render_svg(square).count("<polygon") == 2


def test_svg_too_large():
    with pytest.raises(TooLarge):
        render_svg(run_sequential(grid_mesh(400)), max_elements=100)


def test_csv_header_golden(tmp_path):
    assert ",".join(CSV_COLUMNS) == GOLDEN_HEADER
    rows = bench([GenSpec("grid", 400)], repetitions=3, workers=2)
    path = tmp_path / "b.csv"
    write_csv(rows, path)
    with open(path) as fh:
        assert fh.readline().strip() == GOLDEN_HEADER
    back = read_csv(path)
    for p in ("seq", "par"):
        reps = [r["rep"] for r in back if r["pipeline"] == p]
        assert reps == ["0", "1", "2", "median"]
    assert all(r["Rep"] == "0.000" for r in back if r["pipeline"] == "seq")
    med = medians(back)
    seq = med[("grid", 400, "seq", 1)]
    assert seq["Total"] == pytest.approx(sum(seq[c] for c in ("LM", "LF", "LS", "Trav", "Rep")), abs=5e-3)
    par = med[("grid", 400, "par", 2)]
    assert set(par) >= {"CtD", "LLK", "Scan", "BtH", "TwC", "Total"}
    assert all(v >= 0 for v in par.values())


def test_bench_rejects_zero_repetitions():
    with pytest.raises(ValueError):
        bench([GenSpec("grid", 16)], repetitions=0)
