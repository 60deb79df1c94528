import numpy as np
import pytest

from tripoly.generate import GenSpec, generate, generate_grid
from tripoly.mesh import build_from_triangles

SQUARE_PTS = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
SQUARE_TRIS = [(0, 1, 2), (0, 2, 3)]


def square_mesh():
    return build_from_triangles(SQUARE_PTS, SQUARE_TRIS)


def triangle_mesh():
    return build_from_triangles([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], [(0, 1, 2)])


def grid_mesh(n):
    return build_from_triangles(*generate_grid(n))


def random_mesh(n, seed=0, delta=1e-3):
    return build_from_triangles(*generate(GenSpec("random", n, seed, delta)))


def find_halfedge(mesh, a, b):
    for e in range(mesh.n_halfedges):
        if mesh.origin[e] == a and mesh.target(e) == b:
            return e
    raise KeyError((a, b))


@pytest.fixture
def square():
    return square_mesh()


@pytest.fixture
def single():
    return triangle_mesh()


@pytest.fixture(scope="session")
def grid9():
    return grid_mesh(9)


@pytest.fixture(scope="session")
def rand2k():
    return random_mesh(2000, seed=7)


@pytest.fixture(scope="session")
def rand_corpus():
    rng = np.random.default_rng(2024)
    return [random_mesh(int(rng.integers(500, 2001)), seed=s) for s in range(6)]


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
