import numpy as np
import pytest

from conftest import grid_mesh, random_mesh
from tripoly.mesh import build_from_triangles
from tripoly.parallel import run_parallel
from tripoly.sequential import run_sequential
from tripoly.validate import (
    canonical,
    check_polymesh,
    lepp,
    mesh_stats,
    polygon_area,
    pre_repair_blocks,
    terminal_edge_regions,
)


def test_lepp_square(square):
    for t in (0, 1):
        path, edge = lepp(square, t)
        assert path[0] == t and 1 <= len(path) <= 2
        assert edge == (0, 2)


def test_lepp_grid_cell_diagonal(grid9):
    path, edge = lepp(grid9, 0)
    assert edge == (0, 4) and len(path) == 2


def test_lepp_border_longest():
    mesh = build_from_triangles([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)])
    path, edge = lepp(mesh, 0)
    assert path == [0] and edge == (1, 2)


def test_lepp_follows_longest_edges(rand2k):
    tris = rand2k.triangles()
    for t in range(0, rand2k.n_faces, 97):
        path, edge = lepp(rand2k, t)
        for a, b in zip(path, path[1:]):
            assert len(set(tris[a]) & set(tris[b])) == 2
        assert set(edge) <= set(tris[path[-1]])


def test_regions_square_and_grid(square):
    part = terminal_edge_regions(square)
    assert part.n_regions == 1 and part.blocks() == {frozenset({0, 1})}
    k = 7
    part = terminal_edge_regions(grid_mesh(k * k))
    assert part.n_regions == (k - 1) ** 2
    assert all(len(b) == 2 for b in part.blocks())


def test_region_count_equals_seed_count(rand2k):
    seq = run_sequential(rand2k, trace=True)
    part = terminal_edge_regions(rand2k)
    assert part.n_regions == len(seq.trace["seeds"])
    blocks, problems = pre_repair_blocks(seq, rand2k)
    assert problems == [] and blocks == part.blocks()


def test_check_grid_all_pass():
    mesh = grid_mesh(100)
    rep = check_polymesh(run_sequential(mesh), mesh, terminal_edge_regions(mesh))
    assert rep.ok and rep.area_residual == 0.0 and rep.barrier_tips == 0
    kv = dict(line.split("=") for line in rep.to_kv().splitlines())
    assert kv["ok"] == "1" and kv["polygons"] == "81"


def test_check_detects_corrupted_next(rand2k):
    out = run_sequential(rand2k)
    cyc = out.cycle(int(out.seeds[5]))
    out.next[cyc[0]] = cyc[2]
    rep = check_polymesh(out, rand2k)
    assert not rep.ok
    assert "FAIL" in rep.to_text()


def test_check_detects_dropped_polygon(rand2k):
    out = run_sequential(rand2k)
    out.seeds = out.seeds[1:]
    rep = check_polymesh(out, rand2k)
    assert not rep.ok and rep.area_residual > 1e-9


def test_reports_identical_across_pipelines(rand2k):
    part = terminal_edge_regions(rand2k)
    a = check_polymesh(run_sequential(rand2k), rand2k, part)
    b = check_polymesh(run_parallel(rand2k, workers=2), rand2k, part)
    assert a.to_kv() == b.to_kv()


def test_stats(square):
    s = mesh_stats(run_sequential(square))
    assert s.n_polygons == 1 and s.arity == {4: 1}
    assert s.min_area == s.max_area == 1.0
    k = 6
    s = mesh_stats(run_sequential(grid_mesh(k * k)))
    assert s.arity == {4: (k - 1) ** 2}


def test_stats_consistent_with_report(rand2k):
    out = run_sequential(rand2k)
    s = mesh_stats(out)
    rep = check_polymesh(out, rand2k)
    assert s.n_polygons == rep.n_polygons == sum(s.arity.values())
    tri_area = sum(polygon_area(rand2k.xy, t) for t in rand2k.triangles())
    assert s.mean_area * s.n_polygons == pytest.approx(tri_area, rel=1e-9)
    assert s.frontier_edges == int(out.frontier.sum()) // 2
    assert "arity=" in s.to_kv()


def test_canonical_ignores_seed_choice(rand2k):
    out = run_sequential(rand2k)
    shifted = run_sequential(rand2k)
    shifted.seeds = np.array([shifted.next[s] for s in shifted.seeds[::-1]])
    assert canonical(out) == canonical(shifted)
