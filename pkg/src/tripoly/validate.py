"""Brute-force oracles and consistency checks for polygon meshes.

The oracle works from the triangle list and coordinates alone: it builds
its own edge adjacency and recomputes longest edges, so a labeling bug in
either pipeline cannot leak into the reference answer.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

import numpy as np

from .errors import CycleDetected
from .mesh import PolyMesh, TriMesh


@dataclass
class RegionPartition:
    region_of_triangle: np.ndarray
    terminal_edge_of_region: list[tuple[int, int]]

    @property
    def n_regions(self) -> int:
        return len(self.terminal_edge_of_region)

    def blocks(self) -> set[frozenset[int]]:
        return _blocks(self.region_of_triangle)


class _Oracle:
    def __init__(self, mesh: TriMesh):
        self.tris = [tuple(int(v) for v in t) for t in mesh.triangles()]
        self.xy = mesh.xy
        self.neighbor: dict[tuple[int, int], list[int]] = {}
        for f, (a, b, c) in enumerate(self.tris):
            for u, v in ((a, b), (b, c), (c, a)):
                self.neighbor.setdefault((min(u, v), max(u, v)), []).append(f)
        self.longest = [self._longest(f) for f in range(len(self.tris))]

    def _longest(self, f):
        t = self.tris[f]
        best, best_len = None, -1.0
        for k in range(3):
            u, v = t[k], t[(k + 1) % 3]
            dx = self.xy[v][0] - self.xy[u][0]
            dy = self.xy[v][1] - self.xy[u][1]
            d = dx * dx + dy * dy
            if d > best_len:
                best, best_len = (min(u, v), max(u, v)), d
        return best

    def across(self, f, edge):
        for g in self.neighbor[edge]:
            if g != f:
                return g
        return None

    def lepp(self, t):
        path = [t]
        seen = {t}
        cur = t
        while True:
            edge = self.longest[cur]
            nb = self.across(cur, edge)
            if nb is None:
                return path, edge
            path.append(nb)
            if self.longest[nb] == edge:
                return path, edge
            if nb in seen:
                raise CycleDetected(f"longest-edge path from triangle {t} revisits triangle {nb}")
            seen.add(nb)
            cur = nb


def lepp(mesh: TriMesh, t: int) -> tuple[list[int], tuple[int, int]]:
    """Longest-edge propagation path of triangle ``t`` and its terminal edge.

    The terminal edge is returned as a sorted vertex pair.
    """
    return _Oracle(mesh).lepp(t)


def terminal_edge_regions(mesh: TriMesh) -> RegionPartition:
    oracle = _Oracle(mesh)
    ids: dict[tuple[int, int], int] = {}
    region = np.empty(len(oracle.tris), dtype=np.int64)
    for t in range(len(oracle.tris)):
        _, edge = oracle.lepp(t)
        region[t] = ids.setdefault(edge, len(ids))
    return RegionPartition(region, list(ids))


def _blocks(labels) -> set[frozenset[int]]:
    groups: dict[int, list[int]] = {}
    for t, r in enumerate(labels):
        groups.setdefault(int(r), []).append(t)
    return {frozenset(g) for g in groups.values()}


def triangle_pieces(mesh, frontier) -> np.ndarray:
    """Label triangles by connectivity across non-frontier edges."""
    nf = mesh.n_faces
    label = np.full(nf, -1, dtype=np.int64)
    twin = mesh.twin
    k = 0
    for start in range(nf):
        if label[start] >= 0:
            continue
        label[start] = k
        queue = deque([start])
        while queue:
            f = queue.popleft()
            for e in range(3 * f, 3 * f + 3):
                if frontier[e]:
                    continue
                g = int(twin[e]) // 3
                if label[g] < 0:
                    label[g] = k
                    queue.append(g)
        k += 1
    return label


def cycles_of(polymesh: PolyMesh, seeds=None, next_=None) -> list[list[int]]:
    """Half-edge cycles from each seed; raises ``ValueError`` if one does not close."""
    nxt = polymesh.next if next_ is None else next_
    seeds = polymesh.seeds if seeds is None else seeds
    limit = len(nxt)
    out = []
    for s in seeds:
        s = int(s)
        cyc = [s]
        e = int(nxt[s])
        while e != s:
            cyc.append(e)
            if len(cyc) > limit:
                raise ValueError(f"cycle from seed {s} does not close")
            e = int(nxt[e])
        out.append(cyc)
    return out


def canonical(polymesh: PolyMesh) -> tuple[tuple[int, ...], ...]:
    """Sorted cycles, each rotated to start at its smallest half-edge index."""
    out = []
    for cyc in cycles_of(polymesh):
        i = cyc.index(min(cyc))
        out.append(tuple(cyc[i:] + cyc[:i]))
    return tuple(sorted(out))


def cycle_partition(mesh, cycles, frontier) -> tuple[list[frozenset[int]], list[str]]:
    """Triangle set of each cycle, plus problems found matching cycles to pieces.

    A cycle must consist of frontier half-edges whose left faces all belong
    to one piece, and it must contain every such half-edge of that piece.
    """
    pieces = triangle_pieces(mesh, frontier)
    n_in = 3 * mesh.n_faces
    boundary: dict[int, set[int]] = {}
    for e in np.flatnonzero(frontier[:n_in]):
        boundary.setdefault(int(pieces[e // 3]), set()).add(int(e))
    members: dict[int, list[int]] = {}
    for f, p in enumerate(pieces):
        members.setdefault(int(p), []).append(f)

    problems = []
    sets = []
    claimed = Counter()
    for i, cyc in enumerate(cycles):
        if any(e >= n_in or not frontier[e] for e in cyc):
            problems.append(f"polygon {i}: cycle contains a non-frontier or border half-edge")
            sets.append(frozenset())
            continue
        ps = {int(pieces[e // 3]) for e in cyc}
        if len(ps) != 1:
            problems.append(f"polygon {i}: cycle touches {len(ps)} triangle pieces")
            sets.append(frozenset())
            continue
        p = ps.pop()
        claimed[p] += 1
        if set(cyc) != boundary.get(p, set()):
            problems.append(f"polygon {i}: cycle is not the full boundary of its piece")
        sets.append(frozenset(members[p]))
    for p in members:
        if claimed[p] != 1:
            problems.append(f"triangle piece {p} is claimed by {claimed[p]} polygons")
    return sets, problems


def polygon_area(xy, verts) -> float:
    p = xy[np.asarray(verts)]
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def barrier_tips(polymesh: PolyMesh, cycle) -> list[int]:
    """Cycle vertices touching exactly one frontier edge."""
    fr = polymesh.frontier
    count = np.bincount(polymesh.origin[fr], minlength=polymesh.n_vertices)
    return sorted({int(polymesh.origin[e]) for e in cycle if count[polymesh.origin[e]] == 1})


@dataclass
class CheckReport:
    n_polygons: int = 0
    non_simple: list[int] = field(default_factory=list)
    barrier_tips: int = 0
    partition_problems: list[str] = field(default_factory=list)
    area_residual: float = 0.0
    boundary_missing: int = 0
    boundary_repeated: int = 0
    shared_halfedges: int = 0
    duplicate_cycles: int = 0
    cycle_errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            not self.non_simple
            and self.barrier_tips == 0
            and not self.partition_problems
            and self.area_residual <= 1e-9
            and self.boundary_missing == 0
            and self.boundary_repeated == 0
            and self.shared_halfedges == 0
            and self.duplicate_cycles == 0
            and not self.cycle_errors
        )

    def items(self) -> list[tuple[str, object]]:
        return [
            ("ok", int(self.ok)),
            ("polygons", self.n_polygons),
            ("non_simple", len(self.non_simple)),
            ("barrier_tips", self.barrier_tips),
            ("partition_problems", len(self.partition_problems)),
            ("area_residual", f"{self.area_residual:.3e}"),
            ("boundary_missing", self.boundary_missing),
            ("boundary_repeated", self.boundary_repeated),
            ("shared_halfedges", self.shared_halfedges),
            ("duplicate_cycles", self.duplicate_cycles),
            ("cycle_errors", len(self.cycle_errors)),
        ]

    def to_kv(self) -> str:
        return "\n".join(f"{k}={v}" for k, v in self.items())

    def to_text(self) -> str:
        lines = [f"polygon mesh check: {'PASS' if self.ok else 'FAIL'}"]
        lines += [f"  {k.replace('_', ' ')}: {v}" for k, v in self.items()[1:]]
        for msg in (self.cycle_errors + self.partition_problems)[:20]:
            lines.append(f"  - {msg}")
        return "\n".join(lines)


def _rotate_to_min(cycle):
    i = cycle.index(min(cycle))
    return cycle[i:] + cycle[:i]


def check_polymesh(polymesh: PolyMesh, trimesh: TriMesh, partition: RegionPartition | None = None) -> CheckReport:
    rep = CheckReport(n_polygons=polymesh.n_polygons)
    try:
        # canonical order so both pipelines produce the same report
        cycles = sorted((_rotate_to_min(c) for c in cycles_of(polymesh)), key=min)
    except ValueError as exc:
        rep.cycle_errors.append(str(exc))
        return rep

    seen = Counter()
    for cyc in cycles:
        seen.update(set(cyc))
    rep.shared_halfedges = sum(1 for c in seen.values() if c > 1)
    rep.duplicate_cycles = len(cycles) - len({min(c) for c in cycles})

    xy = polymesh.xy
    poly_area = 0.0
    for i, cyc in enumerate(cycles):
        verts = [int(polymesh.origin[e]) for e in cyc]
        if len(set(verts)) != len(verts):
            rep.non_simple.append(i)
        rep.barrier_tips += len(barrier_tips(polymesh, cyc))
        poly_area += polygon_area(xy, verts)

    tri_area = sum(polygon_area(xy, t) for t in trimesh.triangles()) if trimesh.n_faces else 0.0
    rep.area_residual = abs(poly_area - tri_area) / abs(tri_area) if tri_area else abs(poly_area)

    n_in = 3 * trimesh.n_faces
    border_in = trimesh.twin[n_in:]
    for e in border_in:
        c = seen[int(e)]
        if c == 0:
            rep.boundary_missing += 1
        elif c > 1:
            rep.boundary_repeated += 1

    sets, problems = cycle_partition(trimesh, cycles, polymesh.frontier)
    rep.partition_problems.extend(problems)
    if partition is not None:
        region = partition.region_of_triangle
        for i, s in enumerate(sets):
            if s and len({int(region[t]) for t in s}) != 1:
                rep.partition_problems.append(f"polygon {i} spans several terminal-edge regions")
    return rep


def pre_repair_blocks(polymesh: PolyMesh, trimesh: TriMesh) -> tuple[set[frozenset[int]], list[str]]:
    """Triangle sets of the polygons produced before any repair split.

    Needs a sequential result computed with ``trace=True``.
    """
    tr = polymesh.trace
    cycles = cycles_of(polymesh, tr["pre_repair_seeds"], tr["pre_repair_next"])
    sets, problems = cycle_partition(trimesh, cycles, tr["frontier"])
    return set(sets), problems


@dataclass
class MeshStats:
    n_polygons: int
    arity: dict[int, int]
    min_area: float
    max_area: float
    mean_area: float
    frontier_edges: int

    def to_kv(self) -> str:
        hist = ",".join(f"{k}:{v}" for k, v in sorted(self.arity.items()))
        return "\n".join(
            [
                f"polygons={self.n_polygons}",
                f"arity={hist}",
                f"min_area={self.min_area!r}",
                f"max_area={self.max_area!r}",
                f"mean_area={self.mean_area!r}",
                f"frontier_edges={self.frontier_edges}",
            ]
        )


def mesh_stats(polymesh: PolyMesh) -> MeshStats:
    arity = Counter()
    areas = []
    for s in polymesh.seeds:
        verts = polymesh.polygon(int(s))
        arity[len(verts)] += 1
        areas.append(polygon_area(polymesh.xy, verts))
    a = np.array(areas) if areas else np.zeros(1)
    return MeshStats(
        n_polygons=polymesh.n_polygons,
        arity=dict(arity),
        min_area=float(a.min()),
        max_area=float(a.max()),
        mean_area=float(a.mean()),
        frontier_edges=int(polymesh.frontier.sum()) // 2,
    )
