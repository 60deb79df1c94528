"""Polygon meshes from triangulations by merging terminal-edge regions.

Two pipelines produce identical output: :func:`run_sequential` walks one
region at a time, :func:`run_parallel` runs barrier-separated kernels over
a thread pool.
"""

from .errors import MeshError, ParseError
from .generate import GenSpec, generate, generate_grid, generate_random
from .io import read_hedump, read_mesh, read_node_ele, write_hedump, write_node_ele, write_poly_off
from .mesh import PolyMesh, TriMesh, build_from_triangles, check_invariants
from .parallel import run_parallel
from .sequential import run_sequential
from .validate import canonical, check_polymesh, mesh_stats, terminal_edge_regions

__all__ = [
    "GenSpec",
    "MeshError",
    "ParseError",
    "PolyMesh",
    "TriMesh",
    "build_from_triangles",
    "canonical",
    "check_invariants",
    "check_polymesh",
    "generate",
    "generate_grid",
    "generate_random",
    "mesh_stats",
    "read_hedump",
    "read_mesh",
    "read_node_ele",
    "run_parallel",
    "run_sequential",
    "terminal_edge_regions",
    "write_hedump",
    "write_node_ele",
    "write_poly_off",
]

__version__ = "0.1.0"
