import numpy as np
import pytest

from conftest import find_halfedge, grid_mesh, random_mesh
from tripoly.errors import InfiniteWalk
from tripoly.mesh import build_from_triangles
from tripoly.sequential import (
    detect_barrier_tips,
    label,
    label_frontier_edges,
    label_longest_edges,
    label_seed_edges,
    repair_polygon,
    run_sequential,
    start_output,
    traverse_and_rewire,
)
from tripoly.validate import canonical, check_polymesh, terminal_edge_regions, triangle_pieces


def test_longest_square(square):
    longest = label_longest_edges(square)
    assert set(np.flatnonzero(longest)) == {find_halfedge(square, 0, 2), find_halfedge(square, 2, 0)}


def test_exact_tie_goes_to_lowest_index():
    # sides 0->1 and 2->0 both have squared length 5, side 1->2 has 4
    mesh = build_from_triangles([(0, 0), (1, 2), (-1, 2)], [(0, 1, 2)])
    assert list(np.flatnonzero(label_longest_edges(mesh))) == [0]
    # unit right triangle rotated: legs tie, hypotenuse wins outright
    mesh = build_from_triangles([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)])
    assert list(np.flatnonzero(label_longest_edges(mesh))) == [1]


def test_longest_one_per_face(grid9, rand2k):
    for mesh in (grid9, rand2k):
        longest = label_longest_edges(mesh)
        assert longest.sum() == mesh.n_faces
        assert (longest[: 3 * mesh.n_faces].reshape(-1, 3).sum(axis=1) == 1).all()


def test_grid_diagonals_longest_and_not_frontier(grid9):
    st = label(grid9)
    xy, o, t = grid9.xy, grid9.origin, grid9.twin
    diag = np.abs(xy[o] - xy[o[t]]).sum(axis=1) == 2
    assert (st.longest_edge == diag).all()
    assert (st.frontier_edge == ~diag).all()
    assert len(st.seed_edges) == 4


def test_frontier_square(square):
    fr = label_frontier_edges(square, label_longest_edges(square))
    assert fr.sum() == 8
    assert not fr[find_halfedge(square, 0, 2)]


def test_frontier_symmetric(rand2k):
    fr = label_frontier_edges(rand2k, label_longest_edges(rand2k))
    assert (fr == fr[rand2k.twin]).all()


def test_seeds(square, single, rand2k):
    d = find_halfedge(square, 0, 2)
    assert list(label_seed_edges(square, label_longest_edges(square))) == [min(d, square.twin[d])]
    seeds = label_seed_edges(single, label_longest_edges(single))
    assert len(seeds) == 1 and seeds[0] < 3
    seeds = label_seed_edges(rand2k, label_longest_edges(rand2k))
    assert (seeds < 3 * rand2k.n_faces).all()
    assert len(seeds) == terminal_edge_regions(rand2k).n_regions


def test_traverse_square(square):
    st = label(square)
    out = start_output(square, st.frontier_edge)
    init = traverse_and_rewire(int(st.seed_edges[0]), square, out, st.frontier_edge)
    assert st.frontier_edge[init]
    assert sorted(out.polygon(init)) == [0, 1, 2, 3]
    assert len(out.cycle(init)) == 4
    assert detect_barrier_tips(init, out, square) == []
    # input arrays untouched
    assert (square.next[:6] == [1, 2, 0, 4, 5, 3]).all()


def test_traverse_all_frontier_triangle_is_identity(single):
    fr = np.ones(single.n_halfedges, dtype=bool)
    out = start_output(single, fr)
    init = traverse_and_rewire(0, single, out, fr)
    assert len(out.cycle(init)) == 3
    assert (out.next[:3] == single.next[:3]).all()


def test_traverse_bad_frontier_raises(square):
    fr = np.zeros(square.n_halfedges, dtype=bool)
    out = start_output(square, fr)
    with pytest.raises(InfiniteWalk):
        traverse_and_rewire(0, square, out, fr)


def test_cycle_length_equals_region_frontier_count(rand2k):
    st = label(rand2k)
    out = start_output(rand2k, st.frontier_edge.copy())
    piece = triangle_pieces(rand2k, st.frontier_edge)
    for s in st.seed_edges[:200]:
        init = traverse_and_rewire(int(s), rand2k, out, out.frontier)
        faces = np.flatnonzero(piece == piece[int(s) // 3])
        hes = (3 * faces[:, None] + np.arange(3)).ravel()
        assert len(out.cycle(init)) == int(st.frontier_edge[hes].sum())


def _find_tip_case(degree):
    for s in range(40):
        mesh = random_mesh(300, seed=s)
        st = label(mesh)
        out = start_output(mesh, st.frontier_edge.copy())
        for seed in st.seed_edges:
            init = traverse_and_rewire(int(seed), mesh, out, out.frontier)
            tips = detect_barrier_tips(init, out, mesh)
            if len(tips) == 1 and mesh.degree(tips[0]) == degree:
                return mesh, out, init, tips[0]
    pytest.skip(f"no degree-{degree} barrier tip in the search range")


def _incoming_cw(mesh, v):
    e = mesh.twin[mesh.vertex_halfedge[v]]
    ring = [int(e)]
    for _ in range(mesh.degree(v) - 1):
        ring.append(int(mesh.twin[mesh.next[ring[-1]]]))
    return ring


def test_barrier_tip_matches_frontier_count():
    mesh, out, init, tip = _find_tip_case(5)
    count = np.bincount(mesh.origin[out.frontier], minlength=mesh.n_vertices)
    assert count[tip] == 1
    assert all(count[mesh.origin[e]] >= 2 or mesh.origin[e] == tip for e in out.cycle(init))


def test_repair_degree5_middle_edge():
    mesh, out, init, tip = _find_tip_case(5)
    ring = _incoming_cw(mesh, tip)
    k = next(i for i, e in enumerate(ring) if out.frontier[e])
    middle = ring[(k + 2) % len(ring)]
    assert not out.frontier[middle]
    pieces = repair_polygon(init, mesh, out, out.frontier)
    assert out.frontier[middle] and out.frontier[mesh.twin[middle]]
    assert len(pieces) == 2
    for p in pieces:
        verts = out.polygon(p)
        assert len(set(verts)) == len(verts)
        assert detect_barrier_tips(p, out, mesh) == []


def test_detect_without_input_mesh():
    mesh, out, init, tip = _find_tip_case(5)
    assert detect_barrier_tips(init, out) == [tip]


def test_run_square(square):
    out = run_sequential(square)
    assert out.n_polygons == 1
    assert out.polygons() == [[0, 1, 2, 3]]


@pytest.mark.parametrize("k", [3, 4, 10])
def test_run_grid(k):
    timings = {}
    out = run_sequential(grid_mesh(k * k), timings)
    assert out.n_polygons == (k - 1) ** 2
    assert all(len(p) == 4 for p in out.polygons())
    assert timings["repaired"] == 0 and timings["Rep"] == 0.0
    assert all(timings[c] >= 0 for c in ("LM", "LF", "LS", "Trav"))


def test_run_random_checks(rand2k):
    out = run_sequential(rand2k)
    rep = check_polymesh(out, rand2k, terminal_edge_regions(rand2k))
    assert rep.ok, rep.to_text()


def test_run_is_deterministic(rand2k):
    assert canonical(run_sequential(rand2k)) == canonical(run_sequential(rand2k))


def test_pinched_polygon_after_repair():
    # the middle edge at barrier tip 739 (degree 5) ends at vertex 44, which is
    # already on the region boundary; the remaining piece touches 44 twice
    mesh = random_mesh(742, seed=0)
    out = run_sequential(mesh, trace=True)
    pre = out.trace["frontier"]
    assert np.bincount(mesh.origin[pre], minlength=mesh.n_vertices)[739] == 1
    rep = check_polymesh(out, mesh)
    assert rep.barrier_tips == 0
    assert len(rep.non_simple) == 1
    pinched = [p for p in out.polygons() if len(set(p)) != len(p)]
    assert len(pinched) == 1 and pinched[0].count(44) == 2
