"""Compiled half-edge navigation shared by the builder and both pipelines.

All functions take the flat half-edge arrays directly so they can be called
from inside other ``njit`` functions without boxing a mesh object.
"""

import numba as nb
import numpy as np

jit = nb.njit(cache=True, nogil=True)


@jit
def target(origin, twin, e):
    return origin[twin[e]]


@jit
def cw_vertex_edge(twin, next_, e):
    # pivots around target(e)
    return twin[next_[e]]


@jit
def ccw_vertex_edge(twin, prev, e):
    # pivots around origin(e)
    return twin[prev[e]]


@jit
def degree(twin, next_, vertex_halfedge, v):
    start = twin[vertex_halfedge[v]]  # incoming to v
    e = start
    n = 0
    while True:
        n += 1
        e = twin[next_[e]]
        if e == start:
            return n


@jit
def squared_length(xy, origin, twin, e):
    a = origin[e]
    b = origin[twin[e]]
    dx = xy[b, 0] - xy[a, 0]
    dy = xy[b, 1] - xy[a, 1]
    return dx * dx + dy * dy


@jit
def longest_of_face(xy, origin, twin, f):
    # ties resolved towards the lowest half-edge index
    best = 3 * f
    best_len = squared_length(xy, origin, twin, best)
    for k in range(1, 3):
        e = 3 * f + k
        d = squared_length(xy, origin, twin, e)
        if d > best_len:
            best = e
            best_len = d
    return best


@jit
def region_frontier(twin, next_, frontier, e, limit):
    """Frontier half-edge bounding the same region as the left face of ``e``.

    Rotates clockwise around ``target(e)`` crossing only non-frontier edges.
    Returns -1 if no frontier edge is met within ``limit`` steps.
    """
    if frontier[e]:
        return e
    d = e
    for _ in range(limit):
        d = twin[next_[d]]
        if frontier[d]:
            return twin[d]
    return -1


@jit
def next_frontier(twin, next_, frontier, e, limit):
    """Frontier half-edge following ``e`` on its region boundary, or -1."""
    d = e
    for _ in range(limit):
        d = twin[next_[d]]
        if frontier[d]:
            return twin[d]
    return -1


@jit
def prev_frontier(twin, prev, frontier, e, limit):
    """Frontier half-edge preceding ``e`` on its region boundary, or -1."""
    d = e
    for _ in range(limit):
        d = twin[prev[d]]
        if frontier[d]:
            return twin[d]
    return -1


@jit
def count_frontier_at(twin, next_, frontier, vertex_halfedge, v):
    start = twin[vertex_halfedge[v]]
    e = start
    n = 0
    while True:
        if frontier[e]:
            n += 1
        e = twin[next_[e]]
        if e == start:
            return n


@jit
def middle_edge(twin, next_, frontier, vertex_halfedge, v):
    """Interior edge splitting the fan of barrier tip ``v``.

    Returns an incoming half-edge of ``v`` lying ``(degree - 1) // 2``
    clockwise steps past its single frontier edge, or -1 when the vertex
    has no frontier edge or the step count is zero.
    """
    start = twin[vertex_halfedge[v]]
    e = start
    deg = 0
    found = -1
    while True:
        if found < 0 and frontier[e]:
            found = e
        deg += 1
        e = twin[next_[e]]
        if e == start:
            break
    steps = (deg - 1) // 2
    if found < 0 or steps == 0:
        return -1
    e = found
    for _ in range(steps):
        e = twin[next_[e]]
    return e


@jit
def cycle_min(next_, e, limit):
    best = e
    c = next_[e]
    n = 0
    while c != e:
        if c < best:
            best = c
        c = next_[c]
        n += 1
        if n > limit:
            return -1
    return best


def as_index(a):
    return np.ascontiguousarray(a, dtype=np.int64)
