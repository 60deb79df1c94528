"""Half-edge (DCEL) storage for planar triangulations and polygon meshes.

Topology lives in flat index arrays, one slot per directed half-edge.
Interior half-edges come first, three per triangle in CCW order, so
triangle ``f`` owns half-edges ``3f``, ``3f + 1`` and ``3f + 2``. Border
half-edges follow and chain the exterior face so that every rotation query
is defined on boundary vertices too.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _nav
from .errors import DanglingIndex, DegenerateTriangle, NonManifoldEdge


@dataclass(frozen=True)
class Vertex:
    x: float
    y: float
    is_border: bool
    incident_halfedge: int


@dataclass(frozen=True)
class HalfEdge:
    origin: int
    twin: int
    next: int
    prev: int
    is_border: bool


class _HalfEdgeQueries:
    """Navigation queries shared by :class:`TriMesh` and :class:`PolyMesh`."""

    xy: np.ndarray
    vertex_border: np.ndarray
    vertex_halfedge: np.ndarray
    origin: np.ndarray
    twin: np.ndarray
    next: np.ndarray
    prev: np.ndarray
    is_border: np.ndarray

    @property
    def n_vertices(self) -> int:
        return len(self.xy)

    @property
    def n_halfedges(self) -> int:
        return len(self.origin)

    def vertex(self, v: int) -> Vertex:
        return Vertex(
            float(self.xy[v, 0]),
            float(self.xy[v, 1]),
            bool(self.vertex_border[v]),
            int(self.vertex_halfedge[v]),
        )

    def halfedge(self, e: int) -> HalfEdge:
        return HalfEdge(
            int(self.origin[e]),
            int(self.twin[e]),
            int(self.next[e]),
            int(self.prev[e]),
            bool(self.is_border[e]),
        )

    def target(self, e: int) -> int:
        return int(self.origin[self.twin[e]])

    def cw_vertex_edge(self, e: int) -> int:
        """Next incoming half-edge of ``target(e)`` in clockwise order."""
        return int(self.twin[self.next[e]])

    def ccw_vertex_edge(self, e: int) -> int:
        """Next outgoing half-edge of ``origin(e)`` in counter-clockwise order."""
        return int(self.twin[self.prev[e]])

    def edge_of_vertex(self, v: int) -> int:
        return int(self.vertex_halfedge[v])

    def degree(self, v: int) -> int:
        return int(_nav.degree(self.twin, self.next, self.vertex_halfedge, v))

    def outgoing(self, v: int) -> list[int]:
        """Outgoing half-edges of ``v`` in counter-clockwise order."""
        start = int(self.vertex_halfedge[v])
        out = [start]
        e = self.ccw_vertex_edge(start)
        while e != start:
            out.append(e)
            e = self.ccw_vertex_edge(e)
        return out

    def segment(self, e: int) -> tuple[int, int]:
        return int(self.origin[e]), self.target(e)


@dataclass(eq=False)
class TriMesh(_HalfEdgeQueries):
    xy: np.ndarray
    vertex_border: np.ndarray
    vertex_halfedge: np.ndarray
    origin: np.ndarray
    twin: np.ndarray
    next: np.ndarray
    prev: np.ndarray
    is_border: np.ndarray
    n_faces: int

    def incident_halfedge(self, f: int) -> int:
        return 3 * f

    def triangles(self) -> np.ndarray:
        """Vertex triples of the interior faces, CCW."""
        return self.origin[: 3 * self.n_faces].reshape(-1, 3).copy()

    def face_of(self, e: int) -> int:
        """Interior face owning ``e``, or -1 for border half-edges."""
        return e // 3 if e < 3 * self.n_faces else -1

    @property
    def n_border(self) -> int:
        return self.n_halfedges - 3 * self.n_faces


@dataclass(eq=False)
class PolyMesh(_HalfEdgeQueries):
    """Polygon mesh obtained by rewiring next/prev of a triangulation copy.

    ``seeds`` holds one frontier half-edge per polygon; following ``next``
    from a seed enumerates that polygon's CCW boundary.
    """

    xy: np.ndarray
    vertex_border: np.ndarray
    vertex_halfedge: np.ndarray
    origin: np.ndarray
    twin: np.ndarray
    next: np.ndarray
    prev: np.ndarray
    is_border: np.ndarray
    seeds: np.ndarray
    frontier: np.ndarray
    n_faces: int = 0
    trace: dict = field(default_factory=dict, repr=False)

    @property
    def n_polygons(self) -> int:
        return len(self.seeds)

    def cycle(self, seed: int) -> list[int]:
        limit = self.n_halfedges
        out = [int(seed)]
        e = int(self.next[seed])
        while e != seed:
            out.append(e)
            e = int(self.next[e])
            if len(out) > limit:
                raise ValueError(f"next-cycle from {seed} does not close")
        return out

    def polygon(self, seed: int) -> list[int]:
        """Vertex cycle of the polygon, CCW, starting at ``origin(seed)``."""
        return [int(self.origin[e]) for e in self.cycle(seed)]

    def polygons(self) -> list[list[int]]:
        return [self.polygon(s) for s in self.seeds]


def _signed_area2(xy, tris):
    a = xy[tris[:, 0]]
    b = xy[tris[:, 1]]
    c = xy[tris[:, 2]]
    return (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])


@_nav.jit
def _link_border(twin, next_, prev, n_interior, n_total):
    for g in range(n_interior, n_total):
        h = twin[g]
        # rotate CCW around origin(h) through interior faces until the
        # outgoing border half-edge is reached
        e = h
        for _ in range(n_total):
            t = twin[prev[e]]
            if t >= n_interior:
                next_[g] = t
                prev[t] = g
                break
            e = t


def build_from_triangles(points, triangles) -> TriMesh:
    """Build a :class:`TriMesh` from a triangle soup.

    Clockwise triangles are flipped to CCW. Raises :class:`DanglingIndex`,
    :class:`DegenerateTriangle` or :class:`NonManifoldEdge` on bad input.
    """
    xy = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 2)
    tris = np.array(triangles, dtype=np.int64).reshape(-1, 3)
    nv = len(xy)
    nf = len(tris)

    if nf and (tris.min() < 0 or tris.max() >= nv):
        bad = np.flatnonzero(((tris < 0) | (tris >= nv)).any(axis=1))[0]
        raise DanglingIndex(f"triangle {bad} references vertex outside [0, {nv}): {tris[bad].tolist()}")
    area2 = _signed_area2(xy, tris)
    zero = np.flatnonzero(area2 == 0)
    if len(zero):
        raise DegenerateTriangle(f"triangle {zero[0]} {tris[zero[0]].tolist()} has zero area")
    cw = area2 < 0
    tris[cw] = tris[cw][:, [0, 2, 1]]

    n_in = 3 * nf
    origin = tris.reshape(-1)
    dest = tris[:, [1, 2, 0]].reshape(-1)
    idx = np.arange(n_in, dtype=np.int64)
    local = idx % 3
    next_in = idx - local + (local + 1) % 3
    prev_in = idx - local + (local + 2) % 3

    lo = np.minimum(origin, dest)
    hi = np.maximum(origin, dest)
    key = lo * nv + hi
    order = np.argsort(key, kind="stable")
    skey = key[order]
    starts = np.flatnonzero(np.r_[True, skey[1:] != skey[:-1]]) if n_in else np.empty(0, np.int64)
    counts = np.diff(np.r_[starts, n_in])
    if len(counts) and counts.max() > 2:
        e = order[starts[np.argmax(counts)]]
        raise NonManifoldEdge(f"edge ({lo[e]}, {hi[e]}) is shared by {counts.max()} triangles")

    twin_in = np.full(n_in, -1, dtype=np.int64)
    pair = starts[counts == 2]
    a = order[pair]
    b = order[pair + 1]
    same_dir = origin[a] == origin[b]
    if same_dir.any():
        e = a[same_dir][0]
        raise NonManifoldEdge(
            f"edge ({lo[e]}, {hi[e]}) is traversed in the same direction by two triangles"
        )
    twin_in[a] = b
    twin_in[b] = a

    lonely = order[starts[counts == 1]]
    lonely.sort()
    nb = len(lonely)
    n = n_in + nb
    border_idx = np.arange(n_in, n, dtype=np.int64)

    twin = np.empty(n, dtype=np.int64)
    twin[:n_in] = twin_in
    twin[lonely] = border_idx
    twin[border_idx] = lonely
    origin_all = np.empty(n, dtype=np.int64)
    origin_all[:n_in] = origin
    origin_all[border_idx] = dest[lonely]
    next_ = np.full(n, -1, dtype=np.int64)
    prev = np.full(n, -1, dtype=np.int64)
    next_[:n_in] = next_in
    prev[:n_in] = prev_in
    _link_border(twin, next_, prev, n_in, n)

    is_border = np.zeros(n, dtype=np.bool_)
    is_border[n_in:] = True

    vertex_halfedge = np.full(nv, -1, dtype=np.int64)
    vertex_halfedge[origin[::-1]] = idx[::-1]
    vertex_border = np.zeros(nv, dtype=np.bool_)
    vertex_border[origin_all[n_in:]] = True

    return TriMesh(
        xy=xy,
        vertex_border=vertex_border,
        vertex_halfedge=vertex_halfedge,
        origin=origin_all,
        twin=twin,
        next=next_,
        prev=prev,
        is_border=is_border,
        n_faces=nf,
    )


def check_invariants(mesh: TriMesh) -> list[str]:
    """Sweep every half-edge and vertex; return a list of violations."""
    problems: list[str] = []
    n = mesh.n_halfedges
    idx = np.arange(n)
    for name in ("twin", "next", "prev"):
        arr = getattr(mesh, name)
        if n and (arr.min() < 0 or arr.max() >= n):
            problems.append(f"{name} index out of range")
    if problems:
        return problems
    twin, nxt, prv, org = mesh.twin, mesh.next, mesh.prev, mesh.origin
    if (twin[twin] != idx).any():
        problems.append("twin(twin(e)) != e")
    if (twin == idx).any():
        problems.append("twin(e) == e")
    if (nxt[prv] != idx).any() or (prv[nxt] != idx).any():
        problems.append("next/prev are not inverse")
    if (org[nxt] != org[twin]).any():
        problems.append("origin(next(e)) != target(e)")
    n_in = 3 * mesh.n_faces
    if (mesh.is_border[:n_in]).any() or not mesh.is_border[n_in:].all():
        problems.append("border flags do not match half-edge layout")
    if n_in and (nxt[:n_in] != idx[:n_in] - idx[:n_in] % 3 + (idx[:n_in] % 3 + 1) % 3).any():
        problems.append("interior face cycles are not triangles")
    if (mesh.is_border[twin] & mesh.is_border).any():
        problems.append("border half-edge twinned with border half-edge")
    vh = mesh.vertex_halfedge
    used = vh >= 0
    if (vh >= n).any():
        problems.append("stale incident half-edge")
    elif (org[vh[used]] != np.flatnonzero(used)).any():
        problems.append("origin(edge_of_vertex(v)) != v")
    expect_border = np.zeros(mesh.n_vertices, dtype=bool)
    expect_border[org[n_in:]] = True
    if (expect_border != mesh.vertex_border).any():
        problems.append("vertex border flags inconsistent")
    if n_in:
        area2 = _signed_area2(mesh.xy, mesh.triangles())
        if (area2 <= 0).any():
            problems.append("non-CCW interior face")
    return problems


def euler_characteristic(mesh: TriMesh) -> int:
    """V - E + F with F counting interior faces only (1 for a disk)."""
    used = int((mesh.vertex_halfedge >= 0).sum())
    return used - mesh.n_halfedges // 2 + mesh.n_faces
