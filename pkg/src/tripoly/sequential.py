"""Sequential label / traversal / repair pipeline.

The output mesh is a full copy of the input half-edge arrays whose
``next``/``prev`` links are overwritten so that each terminal-edge region
becomes one face. Non-simple faces (those with barrier tips) are split
along the middle interior edge of every tip and traversed again.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _nav
from ._nav import jit
from .errors import InfiniteWalk, NoFrontierFound
from .mesh import PolyMesh, TriMesh

WALK_FAILED = -1
WALK_TOO_LONG = -2
NO_MIDDLE_EDGE = -3


@dataclass
class LabelState:
    longest_edge: np.ndarray
    frontier_edge: np.ndarray
    seed_edges: np.ndarray


@jit
def _label_longest(xy, origin, twin, n_faces, n):
    longest = np.zeros(n, dtype=np.bool_)
    for f in range(n_faces):
        longest[_nav.longest_of_face(xy, origin, twin, f)] = True
    return longest


@jit
def _label_frontier(twin, is_border, longest):
    n = len(twin)
    frontier = np.zeros(n, dtype=np.bool_)
    for e in range(n):
        t = twin[e]
        if (not longest[e] and not longest[t]) or is_border[e] or is_border[t]:
            frontier[e] = True
    return frontier


@jit
def _label_seeds(twin, is_border, longest):
    n = len(twin)
    out = np.empty(n, dtype=np.int64)
    k = 0
    for e in range(n):
        if is_border[e]:
            continue
        t = twin[e]
        if is_border[t]:
            if longest[e]:
                out[k] = e
                k += 1
        elif e < t and longest[e] and longest[t]:
            out[k] = e
            k += 1
    return out[:k].copy()


@jit
def _traverse(seed, twin, next_in, frontier, next_out, prev_out, limit):
    init = _nav.region_frontier(twin, next_in, frontier, seed, limit)
    if init < 0:
        return WALK_FAILED
    out_curr = init
    steps = 0
    while True:
        in_curr = _nav.next_frontier(twin, next_in, frontier, out_curr, limit)
        if in_curr < 0:
            return WALK_FAILED
        next_out[out_curr] = in_curr
        prev_out[in_curr] = out_curr
        out_curr = in_curr
        if in_curr == init:
            return init
        steps += 1
        if steps > limit:
            return WALK_TOO_LONG


@jit
def _has_barrier_tip(init, origin, twin, next_in, next_out, frontier, vertex_halfedge):
    e = init
    while True:
        if _nav.count_frontier_at(twin, next_in, frontier, vertex_halfedge, origin[e]) == 1:
            return True
        e = next_out[e]
        if e == init:
            return False


@jit
def _traverse_all(seeds, origin, twin, next_in, frontier, vertex_halfedge, next_out, prev_out):
    limit = len(twin)
    inits = np.empty(len(seeds), dtype=np.int64)
    broken = np.zeros(len(seeds), dtype=np.bool_)
    for i in range(len(seeds)):
        init = _traverse(seeds[i], twin, next_in, frontier, next_out, prev_out, limit)
        inits[i] = init
        if init < 0:
            return inits, broken, i
        broken[i] = _has_barrier_tip(init, origin, twin, next_in, next_out, frontier, vertex_halfedge)
    return inits, broken, -1


@jit
def _tips_of(init, origin, twin, next_in, next_out, frontier, vertex_halfedge):
    buf = []
    e = init
    while True:
        v = origin[e]
        if _nav.count_frontier_at(twin, next_in, frontier, vertex_halfedge, v) == 1:
            buf.append(v)
        e = next_out[e]
        if e == init:
            break
    return np.array(buf, dtype=np.int64) if len(buf) else np.empty(0, dtype=np.int64)


@jit
def _repair(init, origin, twin, next_in, frontier, vertex_halfedge, next_out, prev_out, usage):
    """Split one non-simple polygon; returns (seeds of pieces, status)."""
    limit = len(twin)
    tips = _tips_of(init, origin, twin, next_in, next_out, frontier, vertex_halfedge)
    middles = np.empty(len(tips), dtype=np.int64)
    # every middle edge is chosen from the pre-split labels so the result
    # does not depend on the order in which tips are visited
    for i in range(len(tips)):
        m = _nav.middle_edge(twin, next_in, frontier, vertex_halfedge, tips[i])
        if m < 0:
            return np.empty(0, dtype=np.int64), NO_MIDDLE_EDGE
        middles[i] = m
    subseeds = np.empty(2 * len(tips), dtype=np.int64)
    for i in range(len(tips)):
        m = middles[i]
        t = twin[m]
        frontier[m] = True
        frontier[t] = True
        subseeds[2 * i] = m
        subseeds[2 * i + 1] = t
        usage[m] = True
        usage[t] = True
    pieces = np.empty(len(subseeds), dtype=np.int64)
    k = 0
    for h in subseeds:
        if not usage[h]:
            continue
        usage[h] = False
        p = _traverse(h, twin, next_in, frontier, next_out, prev_out, limit)
        if p < 0:
            return pieces[:k].copy(), p
        e = p
        while True:
            usage[e] = False
            e = next_out[e]
            if e == p:
                break
        pieces[k] = p
        k += 1
    return pieces[:k].copy(), 0


def label_longest_edges(mesh: TriMesh) -> np.ndarray:
    return _label_longest(mesh.xy, mesh.origin, mesh.twin, mesh.n_faces, mesh.n_halfedges)


def label_frontier_edges(mesh: TriMesh, longest: np.ndarray) -> np.ndarray:
    return _label_frontier(mesh.twin, mesh.is_border, longest)


def label_seed_edges(mesh: TriMesh, longest: np.ndarray) -> np.ndarray:
    return _label_seeds(mesh.twin, mesh.is_border, longest)


def label(mesh: TriMesh) -> LabelState:
    longest = label_longest_edges(mesh)
    return LabelState(longest, label_frontier_edges(mesh, longest), label_seed_edges(mesh, longest))


def start_output(mesh: TriMesh, frontier: np.ndarray) -> PolyMesh:
    """Copy the input arrays into a polygon mesh awaiting rewiring."""
    return PolyMesh(
        xy=mesh.xy,
        vertex_border=mesh.vertex_border,
        vertex_halfedge=mesh.vertex_halfedge,
        origin=mesh.origin,
        twin=mesh.twin,
        next=mesh.next.copy(),
        prev=mesh.prev.copy(),
        is_border=mesh.is_border,
        seeds=np.empty(0, dtype=np.int64),
        frontier=frontier,
        n_faces=mesh.n_faces,
    )


def _walk_error(code, seed):
    if code == WALK_TOO_LONG:
        return InfiniteWalk(f"boundary walk from seed {seed} exceeded the half-edge count")
    if code == NO_MIDDLE_EDGE:
        return NoFrontierFound(f"polygon seeded at {seed} has a barrier tip without a middle edge")
    return InfiniteWalk(f"no frontier edge reachable from seed {seed}; frontier labels are malformed")


def traverse_and_rewire(seed: int, mesh_in: TriMesh, mesh_out: PolyMesh, frontier: np.ndarray) -> int:
    """Link the frontier boundary of ``seed``'s region in ``mesh_out``.

    Only ``mesh_out.next``/``mesh_out.prev`` are written. Returns the first
    frontier half-edge of the cycle.
    """
    init = _traverse(seed, mesh_in.twin, mesh_in.next, frontier, mesh_out.next, mesh_out.prev, mesh_in.n_halfedges)
    if init < 0:
        raise _walk_error(init, seed)
    return int(init)


def detect_barrier_tips(seed: int, mesh_out: PolyMesh, mesh_in: TriMesh | None = None) -> list[int]:
    """Vertices of the polygon through ``seed`` touching exactly one frontier edge.

    Rotation runs over the triangulation links (``mesh_in``); when omitted
    they are rebuilt from the output mesh's face layout.
    """
    next_in = mesh_in.next if mesh_in is not None else _triangulation_next(mesh_out)
    tips = _tips_of(
        seed, mesh_out.origin, mesh_out.twin, next_in, mesh_out.next, mesh_out.frontier, mesh_out.vertex_halfedge
    )
    return [int(v) for v in tips]


def _triangulation_next(mesh: PolyMesh) -> np.ndarray:
    n_in = 3 * mesh.n_faces
    idx = np.arange(n_in, dtype=np.int64)
    out = mesh.next.copy()
    out[:n_in] = idx - idx % 3 + (idx % 3 + 1) % 3
    return out


def repair_polygon(seed: int, mesh_in: TriMesh, mesh_out: PolyMesh, frontier: np.ndarray) -> list[int]:
    """Split a non-simple polygon; returns the seeds of the simple pieces."""
    usage = np.zeros(mesh_in.n_halfedges, dtype=np.bool_)
    pieces, status = _repair(
        seed, mesh_in.origin, mesh_in.twin, mesh_in.next, frontier, mesh_in.vertex_halfedge,
        mesh_out.next, mesh_out.prev, usage,
    )
    if status != 0:
        raise _walk_error(status, seed)
    return [int(p) for p in pieces]


def run_sequential(mesh: TriMesh, timings: dict | None = None, trace: bool = False) -> PolyMesh:
    """Convert a triangulation into a polygon mesh, one thread.

    ``timings`` receives per-phase wall-clock milliseconds under the keys
    ``LM``, ``LF``, ``LS``, ``Trav`` and ``Rep``. With ``trace`` the result
    carries the label-phase bit-vectors and the pre-repair cycles.
    """
    clock = time.perf_counter_ns
    t0 = clock()
    longest = label_longest_edges(mesh)
    t1 = clock()
    frontier = label_frontier_edges(mesh, longest)
    t2 = clock()
    seeds = label_seed_edges(mesh, longest)
    t3 = clock()

    out = start_output(mesh, frontier.copy())
    frontier = out.frontier
    inits, broken, failed = _traverse_all(
        seeds, mesh.origin, mesh.twin, mesh.next, frontier, mesh.vertex_halfedge, out.next, out.prev
    )
    if failed >= 0:
        raise _walk_error(inits[failed], int(seeds[failed]))
    t4 = clock()

    info = {}
    if trace:
        info = {
            "longest": longest,
            "frontier": frontier.copy(),
            "seeds": seeds,
            "pre_repair_seeds": inits.copy(),
            "pre_repair_next": out.next.copy(),
            "broken": broken.copy(),
        }

    final = inits
    n_broken = int(broken.sum())
    if n_broken:
        usage = np.zeros(mesh.n_halfedges, dtype=np.bool_)
        parts = []
        for i, s in enumerate(inits):
            if not broken[i]:
                parts.append(np.array([s], dtype=np.int64))
                continue
            pieces, status = _repair(
                s, mesh.origin, mesh.twin, mesh.next, frontier, mesh.vertex_halfedge, out.next, out.prev, usage
            )
            if status != 0:
                raise _walk_error(status, int(s))
            parts.append(pieces)
        final = np.concatenate(parts)
    t5 = clock()

    out.seeds = np.ascontiguousarray(final, dtype=np.int64)
    out.trace = info
    if timings is not None:
        timings.update(
            LM=(t1 - t0) / 1e6,
            LF=(t2 - t1) / 1e6,
            LS=(t3 - t2) / 1e6,
            Trav=(t4 - t3) / 1e6,
            Rep=(t5 - t4) / 1e6 if n_broken else 0.0,
            repaired=n_broken,
        )
    return out
