"""Benchmark input generators: uniform grids and random Delaunay meshes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .delaunay import delaunay
from .errors import DuplicatePoint, TooFewPoints

DEFAULT_DELTA = 1e-3


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n_points: int
    rng_seed: int = 0
    border_tolerance: float = DEFAULT_DELTA

    def __post_init__(self):
        if self.kind not in ("grid", "random"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.n_points < 3:
            raise TooFewPoints(f"n_points must be >= 3, got {self.n_points}")
        if self.border_tolerance < 0:
            raise ValueError("border tolerance must be non-negative")

    @classmethod
    def parse(cls, text: str, seed: int = 0, delta: float = DEFAULT_DELTA) -> "GenSpec":
        """Parse ``grid:N`` or ``random:N``."""
        kind, sep, count = text.partition(":")
        if not sep or not count.strip().isdigit():
            raise ValueError(f"expected KIND:N, got {text!r}")
        return cls(kind.strip(), int(count), seed, delta)

    def label(self) -> str:
        return f"{self.kind}:{self.n_points}"


def generate_grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit-spaced ``s x s`` grid with ``s = isqrt(n)``, two CCW triangles per cell.

    Vertex ``k`` sits at ``(k % s, k // s)``; cell ``i`` yields triangles
    ``(i, i+1, i+s+1)`` and ``(i, i+s+1, i+s)``.
    """
    if n < 4:
        raise TooFewPoints(f"a grid needs at least 4 points, got {n}")
    s = math.isqrt(n)
    k = np.arange(s * s, dtype=np.int64)
    points = np.column_stack([k % s, k // s]).astype(np.float64)
    i = k[: s * s - s]
    i = i[i % s != s - 1]
    tris = np.empty((2 * len(i), 3), dtype=np.int64)
    tris[0::2] = np.column_stack([i, i + 1, i + s + 1])
    tris[1::2] = np.column_stack([i, i + s + 1, i + s])
    return points, tris


def _snap(pts: np.ndarray, delta: float) -> np.ndarray:
    if delta > 0:
        pts = np.where(pts < delta, 0.0, pts)
        pts = np.where(pts > 1.0 - delta, 1.0, pts)
    return pts


def random_points(n: int, seed: int, delta: float = DEFAULT_DELTA) -> np.ndarray:
    """``n`` distinct uniform points in the unit square, snapped to its sides.

    Uses the counter-based Philox generator. Points that collide after
    snapping are redrawn.
    """
    if n < 3:
        raise TooFewPoints(f"need at least 3 points, got {n}")
    rng = np.random.Generator(np.random.Philox(seed))
    pts = _snap(rng.random((n, 2)), delta)
    for _ in range(1000):
        _, first = np.unique(pts, axis=0, return_index=True)
        if len(first) == n:
            return pts
        dup = np.setdiff1d(np.arange(n), first)
        pts[dup] = _snap(rng.random((len(dup), 2)), delta)
    raise DuplicatePoint("could not draw distinct points after snapping")


def generate_random(spec: GenSpec) -> tuple[np.ndarray, np.ndarray]:
    if spec.kind != "random":
        raise ValueError("generate_random needs a random GenSpec")
    pts = random_points(spec.n_points, spec.rng_seed, spec.border_tolerance)
    return pts, delaunay(pts)


def generate(spec: GenSpec) -> tuple[np.ndarray, np.ndarray]:
    if spec.kind == "grid":
        return generate_grid(spec.n_points)
    return generate_random(spec)
