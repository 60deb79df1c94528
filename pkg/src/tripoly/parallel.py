"""Data-parallel kernel pipeline.

Every stage is one kernel launch over independent work-items (triangles,
half-edges or vertices) with a barrier between launches. Writes follow a
fixed discipline so the result is independent of scheduling:

* a work-item writes only its own cells, or
* several work-items store the same value ``True`` into a shared cell.

The extra-frontier kernel reads the frontier labels from a snapshot taken
before the launch, so barrier tips never observe each other's new edges.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _nav
from ._nav import jit
from .errors import InfiniteRotation, NoFrontierFound
from .mesh import PolyMesh, TriMesh
from .pool import KernelPool
from .scan import compact_seeds

ERR_NO_MIDDLE = 1
ERR_ROTATION = 2


@dataclass
class ParState:
    longest_edge: np.ndarray
    frontier_edge: np.ndarray
    seed_bits: np.ndarray
    next_out: np.ndarray
    prev_out: np.ndarray
    seeds_compact: np.ndarray | None = None


@jit
def _k_label_longest(lo, hi, order, xy, origin, twin, longest):
    ident = len(order) == 0
    for i in range(lo, hi):
        f = i if ident else order[i]
        longest[_nav.longest_of_face(xy, origin, twin, f)] = True


@jit
def _k_label_frontier(lo, hi, order, twin, is_border, longest, frontier):
    ident = len(order) == 0
    for i in range(lo, hi):
        e = i if ident else order[i]
        t = twin[e]
        if (not longest[e] and not longest[t]) or is_border[e] or is_border[t]:
            frontier[e] = True


@jit
def _k_label_seeds(lo, hi, order, twin, is_border, longest, seed_bits):
    ident = len(order) == 0
    for i in range(lo, hi):
        e = i if ident else order[i]
        if is_border[e]:
            continue
        t = twin[e]
        if is_border[t]:
            if longest[e]:
                seed_bits[e] = True
        elif e < t and longest[e] and longest[t]:
            seed_bits[e] = True


@jit
def _k_label_extra_frontier(lo, hi, order, twin, next_, vertex_halfedge, frontier_in, frontier, seed_bits, err):
    ident = len(order) == 0
    for i in range(lo, hi):
        v = i if ident else order[i]
        if vertex_halfedge[v] < 0:
            continue
        if _nav.count_frontier_at(twin, next_, frontier_in, vertex_halfedge, v) != 1:
            continue
        m = _nav.middle_edge(twin, next_, frontier_in, vertex_halfedge, v)
        if m < 0:
            err[0] = ERR_NO_MIDDLE
            continue
        t = twin[m]
        frontier[m] = True
        frontier[t] = True
        seed_bits[m] = True
        seed_bits[t] = True


@jit
def _k_change_attributes(lo, hi, order, twin, next_in, prev_in, frontier, next_out, prev_out, err):
    ident = len(order) == 0
    limit = len(twin)
    for i in range(lo, hi):
        e = i if ident else order[i]
        if not frontier[e]:
            continue
        n = _nav.next_frontier(twin, next_in, frontier, e, limit)
        p = _nav.prev_frontier(twin, prev_in, frontier, e, limit)
        if n < 0 or p < 0:
            err[0] = ERR_ROTATION
            continue
        next_out[e] = n
        prev_out[e] = p


@jit
def _k_search_frontier_seed(lo, hi, order, twin, next_in, frontier, seed_bits, err):
    ident = len(order) == 0
    limit = len(twin)
    for i in range(lo, hi):
        e = i if ident else order[i]
        if not seed_bits[e] or frontier[e]:
            continue
        f = _nav.region_frontier(twin, next_in, frontier, e, limit)
        if f < 0:
            err[0] = ERR_ROTATION
            continue
        seed_bits[e] = False
        seed_bits[f] = True


@jit
def _k_overwrite_seeds(lo, hi, order, next_out, seed_bits, err):
    ident = len(order) == 0
    limit = len(next_out)
    for i in range(lo, hi):
        e = i if ident else order[i]
        if not seed_bits[e]:
            continue
        m = _nav.cycle_min(next_out, e, limit)
        if m < 0:
            err[0] = ERR_ROTATION
            continue
        if m != e:
            seed_bits[e] = False
        seed_bits[m] = True


def _check(err, what):
    if err[0] == ERR_NO_MIDDLE:
        raise NoFrontierFound(f"{what}: a barrier tip has no interior middle edge")
    if err[0] == ERR_ROTATION:
        raise InfiniteRotation(f"{what}: rotation found no frontier edge; labels are inconsistent")


def _pool(pool, workers):
    return pool if pool is not None else KernelPool(workers)


def kernel_label_longest(mesh: TriMesh, pool: KernelPool | None = None) -> np.ndarray:
    longest = np.zeros(mesh.n_halfedges, dtype=np.bool_)
    _pool(pool, 1).launch(_k_label_longest, mesh.n_faces, mesh.xy, mesh.origin, mesh.twin, longest)
    return longest


def kernel_label_frontier(mesh: TriMesh, longest, pool: KernelPool | None = None) -> np.ndarray:
    frontier = np.zeros(mesh.n_halfedges, dtype=np.bool_)
    _pool(pool, 1).launch(_k_label_frontier, mesh.n_halfedges, mesh.twin, mesh.is_border, longest, frontier)
    return frontier


def kernel_label_seeds(mesh: TriMesh, longest, pool: KernelPool | None = None) -> np.ndarray:
    seed_bits = np.zeros(mesh.n_halfedges, dtype=np.bool_)
    _pool(pool, 1).launch(_k_label_seeds, mesh.n_halfedges, mesh.twin, mesh.is_border, longest, seed_bits)
    return seed_bits


def kernel_label_extra_frontier(mesh: TriMesh, frontier, seed_bits, pool: KernelPool | None = None):
    """Split barrier tips in place; returns ``(frontier, seed_bits)``."""
    snapshot = frontier.copy()
    err = np.zeros(1, dtype=np.int64)
    _pool(pool, 1).launch(
        _k_label_extra_frontier, mesh.n_vertices,
        mesh.twin, mesh.next, mesh.vertex_halfedge, snapshot, frontier, seed_bits, err,
    )
    _check(err, "label extra frontier")
    return frontier, seed_bits


def kernel_change_attributes(mesh: TriMesh, frontier, pool: KernelPool | None = None):
    """Rewired ``(next, prev)`` copies; non-frontier half-edges keep their links."""
    next_out = mesh.next.copy()
    prev_out = mesh.prev.copy()
    err = np.zeros(1, dtype=np.int64)
    _pool(pool, 1).launch(
        _k_change_attributes, mesh.n_halfedges, mesh.twin, mesh.next, mesh.prev, frontier, next_out, prev_out, err
    )
    _check(err, "change attributes")
    return next_out, prev_out


def kernel_search_frontier_seed(mesh: TriMesh, frontier, seed_bits, pool: KernelPool | None = None):
    err = np.zeros(1, dtype=np.int64)
    _pool(pool, 1).launch(_k_search_frontier_seed, mesh.n_halfedges, mesh.twin, mesh.next, frontier, seed_bits, err)
    _check(err, "search frontier seed")
    return seed_bits


def kernel_overwrite_seeds(next_out, seed_bits, pool: KernelPool | None = None):
    err = np.zeros(1, dtype=np.int64)
    _pool(pool, 1).launch(_k_overwrite_seeds, len(next_out), next_out, seed_bits, err)
    _check(err, "overwrite seeds")
    return seed_bits


def _device_copy(mesh: TriMesh) -> TriMesh:
    return TriMesh(
        xy=mesh.xy.copy(),
        vertex_border=mesh.vertex_border.copy(),
        vertex_halfedge=mesh.vertex_halfedge.copy(),
        origin=mesh.origin.copy(),
        twin=mesh.twin.copy(),
        next=mesh.next.copy(),
        prev=mesh.prev.copy(),
        is_border=mesh.is_border.copy(),
        n_faces=mesh.n_faces,
    )


KERNEL_COLUMNS = ("LLK", "LFK", "LSK", "LEK", "CaK", "SFK", "OSK", "Scan")


def run_parallel(
    mesh: TriMesh,
    workers: int = 1,
    timings: dict | None = None,
    permute_seed: int | None = None,
    copies: bool = True,
    trace: bool = False,
    pool: KernelPool | None = None,
) -> PolyMesh:
    """Convert a triangulation into a polygon mesh with data-parallel kernels.

    ``copies`` brackets the kernels with a copy of the input arrays into a
    fresh allocation (``CtD``) and of the results back out (``BtH``),
    standing in for host/device transfers. ``timings`` receives
    milliseconds per kernel plus ``Total`` (kernels only) and ``TwC``
    (kernels and copies).
    """
    own = pool is None
    pool = pool if pool is not None else KernelPool(workers, permute_seed)
    clock = time.perf_counter_ns
    try:
        stamps = [clock()]
        dev = _device_copy(mesh) if copies else mesh
        stamps.append(clock())
        longest = kernel_label_longest(dev, pool)
        stamps.append(clock())
        frontier = kernel_label_frontier(dev, longest, pool)
        stamps.append(clock())
        seed_bits = kernel_label_seeds(dev, longest, pool)
        stamps.append(clock())
        if trace:
            info = {"longest": longest.copy(), "frontier": frontier.copy(), "seed_bits": seed_bits.copy()}
        kernel_label_extra_frontier(dev, frontier, seed_bits, pool)
        stamps.append(clock())
        next_out, prev_out = kernel_change_attributes(dev, frontier, pool)
        stamps.append(clock())
        kernel_search_frontier_seed(dev, frontier, seed_bits, pool)
        stamps.append(clock())
        kernel_overwrite_seeds(next_out, seed_bits, pool)
        stamps.append(clock())
        seeds = compact_seeds(seed_bits, pool)
        stamps.append(clock())
        if copies:
            next_out = next_out.copy()
            prev_out = prev_out.copy()
            seeds = seeds.copy()
            frontier = frontier.copy()
        stamps.append(clock())
    finally:
        if own:
            pool.close()

    out = PolyMesh(
        xy=mesh.xy,
        vertex_border=mesh.vertex_border,
        vertex_halfedge=mesh.vertex_halfedge,
        origin=mesh.origin,
        twin=mesh.twin,
        next=next_out,
        prev=prev_out,
        is_border=mesh.is_border,
        seeds=seeds,
        frontier=frontier,
        n_faces=mesh.n_faces,
    )
    if trace:
        info["state"] = ParState(longest, frontier, seed_bits, next_out, prev_out, seeds)
        out.trace = info
    if timings is not None:
        ms = np.diff(np.array(stamps, dtype=np.int64)) / 1e6
        timings["CtD"] = float(ms[0]) if copies else 0.0
        for name, v in zip(KERNEL_COLUMNS, ms[1:9]):
            timings[name] = float(v)
        timings["BtH"] = float(ms[9]) if copies else 0.0
        timings["Total"] = float(ms[1:9].sum())
        timings["TwC"] = timings["Total"] + timings["CtD"] + timings["BtH"]
    return out
