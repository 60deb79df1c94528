import numpy as np
import pytest

from tripoly.delaunay import delaunay, hilbert_order, incircle, orient2d
from tripoly.errors import TooFewPoints
from tripoly.generate import DEFAULT_DELTA, GenSpec, generate, generate_grid, generate_random, random_points
from tripoly.mesh import build_from_triangles, check_invariants


def incircle_dets(pts, tris):
    """Lifted incircle determinant of every point against every triangle."""
    a, b, c = pts[tris[:, 0]], pts[tris[:, 1]], pts[tris[:, 2]]
    out = np.empty((len(tris), len(pts)))
    for lo in range(0, len(pts), 256):
        d = pts[lo : lo + 256]
        rows = []
        for p in (a, b, c):
            dx = p[:, None, 0] - d[None, :, 0]
            dy = p[:, None, 1] - d[None, :, 1]
            rows.append((dx, dy, dx * dx + dy * dy))
        (ax, ay, al), (bx, by, bl), (cx, cy, cl) = rows
        out[:, lo : lo + 256] = (
            ax * (by * cl - bl * cy) - ay * (bx * cl - bl * cx) + al * (bx * cy - by * cx)
        )
    return out


def test_grid_small():
    pts, tris = generate_grid(9)
    assert pts.shape == (9, 2) and tris.shape == (8, 3)
    assert pts[4].tolist() == [1.0, 1.0]
    assert tris[:2].tolist() == [[0, 1, 4], [0, 4, 3]]
    pts, tris = generate_grid(4)
    assert pts.tolist() == [[0, 0], [1, 0], [0, 1], [1, 1]]
    assert tris.tolist() == [[0, 1, 3], [0, 3, 2]]


def test_grid_non_square_count_and_million():
    pts, tris = generate_grid(10)
    assert len(pts) == 9
    pts, tris = generate_grid(1_000_000)
    assert len(pts) == 1_000_000 and len(tris) == 2 * 999**2


def test_grid_valid_ccw():
    mesh = build_from_triangles(*generate_grid(36))
    assert check_invariants(mesh) == []
    pts, tris = generate_grid(36)
    a, b, c = pts[tris[:, 0]], pts[tris[:, 1]], pts[tris[:, 2]]
    area2 = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    assert (area2 > 0).all()


def test_too_few():
    with pytest.raises(TooFewPoints):
        generate_grid(3)
    with pytest.raises(TooFewPoints):
        GenSpec("random", 2)


def test_genspec_parse():
    spec = GenSpec.parse("random:100", seed=4, delta=0.0)
    assert spec == GenSpec("random", 100, 4, 0.0)
    assert spec.label() == "random:100"
    assert GenSpec.parse("grid:9").border_tolerance == DEFAULT_DELTA
    for bad in ("grid", "grid:x", "hex:10"):
        with pytest.raises(ValueError):
            GenSpec.parse(bad)
    with pytest.raises(ValueError):
        GenSpec("random", 10, 0, -1.0)


def test_random_deterministic():
    a = generate(GenSpec("random", 100, 9))
    b = generate(GenSpec("random", 100, 9))
    assert a[0].tobytes() == b[0].tobytes() and a[1].tobytes() == b[1].tobytes()
    c = generate(GenSpec("random", 100, 10))
    assert c[0].tobytes() != a[0].tobytes()


def test_random_points_distinct_and_snapped():
    pts = random_points(3000, 1, delta=0.01)
    assert len(np.unique(pts, axis=0)) == 3000
    on_side = (pts == 0.0) | (pts == 1.0)
    near = (pts < 0.01) | (pts > 0.99)
    assert (on_side == near).all()
    assert on_side.any()


def test_random_delaunay_empty_circle():
    pts, tris = generate_random(GenSpec("random", 2000, 3, 1e-3))
    det = incircle_dets(pts, tris)
    det[np.arange(len(tris))[:, None], tris] = -np.inf
    assert det.max() <= 1e-12
    assert check_invariants(build_from_triangles(pts, tris)) == []


def test_zero_delta_border_is_hull():
    pts, tris = generate_random(GenSpec("random", 400, 5, 0.0))
    mesh = build_from_triangles(pts, tris)
    border = np.flatnonzero(mesh.is_border)
    for e in border:
        a, b = mesh.origin[e], mesh.target(e)
        side = np.sign(
            (pts[b, 0] - pts[a, 0]) * (pts[:, 1] - pts[a, 1]) - (pts[b, 1] - pts[a, 1]) * (pts[:, 0] - pts[a, 0])
        )
        # border half-edges run clockwise: every point is on their right or on the line
        assert (side <= 0).all()


def test_snapped_collinear_sides_triangulate():
    pts = random_points(500, 2, delta=0.05)
    mesh = build_from_triangles(pts, delaunay(pts))
    assert check_invariants(mesh) == []
    hull = (pts == 0) | (pts == 1)
    assert mesh.vertex_border[hull.any(axis=1)].all()


def test_predicates_exact_fallback():
    assert orient2d((0, 0), (1, 1), (2, 2)) == 0
    assert orient2d((0, 0), (1, 0), (0, 1)) == 1
    assert orient2d((0.1, 0.1), (0.2, 0.2), (0.30000000000000004, 0.30000000000000004)) == 0
    assert incircle((0, 0), (1, 0), (0, 1), (1, 1)) == 0
    assert incircle((0, 0), (1, 0), (0, 1), (0.5, 0.5)) == 1
    assert incircle((0, 0), (1, 0), (0, 1), (2, 2)) == -1


def test_hilbert_order_is_permutation():
    pts = random_points(1000, 0)
    order = hilbert_order(pts)
    assert sorted(order.tolist()) == list(range(1000))


def test_delaunay_rejects_bad_input():
    with pytest.raises(ValueError):
        delaunay([(0, 0), (1, 1), (2, 2)])
    with pytest.raises(ValueError):
        delaunay([(0, 0), (1, 0), (0, 1), (1, 0)])
