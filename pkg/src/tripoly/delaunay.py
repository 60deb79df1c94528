"""Incremental Bowyer-Watson Delaunay triangulation for fixture generation.

Hull handling uses ghost triangles: every convex-hull edge ``a -> b`` (with
the exterior on its left) owns a triangle ``(a, b, GHOST)``. A point is
inside a ghost's "circumcircle" when it lies strictly outside the hull edge
or on the open segment itself. Predicates fall back to exact rational
arithmetic when the floating-point result is within its error bound, so
collinear points snapped onto the square's sides are handled exactly.

Meant for desk-scale inputs (up to ~1e5 points).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

GHOST = -1

_EPS = np.finfo(float).eps / 2
_ORIENT_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_INCIRCLE_BOUND = (10.0 + 96.0 * _EPS) * _EPS


def orient2d(a, b, c) -> int:
    """Sign of twice the signed area of ``abc`` (+1 for CCW)."""
    l = (b[0] - a[0]) * (c[1] - a[1])
    r = (b[1] - a[1]) * (c[0] - a[0])
    det = l - r
    if abs(det) > _ORIENT_BOUND * (abs(l) + abs(r)):
        return 1 if det > 0 else -1
    ax, ay, bx, by, cx, cy = (Fraction(v) for v in (a[0], a[1], b[0], b[1], c[0], c[1]))
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (det > 0) - (det < 0)


def incircle(a, b, c, d) -> int:
    """+1 if ``d`` is strictly inside the circumcircle of CCW ``abc``."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    bc = bdx * cdy - cdx * bdy
    ca = cdx * ady - adx * cdy
    ab = adx * bdy - bdx * ady
    det = alift * bc + blift * ca + clift * ab
    permanent = (
        (abs(bdx * cdy) + abs(cdx * bdy)) * alift
        + (abs(cdx * ady) + abs(adx * cdy)) * blift
        + (abs(adx * bdy) + abs(bdx * ady)) * clift
    )
    if abs(det) > _INCIRCLE_BOUND * permanent:
        return 1 if det > 0 else -1
    F = Fraction
    adx, ady = F(a[0]) - F(d[0]), F(a[1]) - F(d[1])
    bdx, bdy = F(b[0]) - F(d[0]), F(b[1]) - F(d[1])
    cdx, cdy = F(c[0]) - F(d[0]), F(c[1]) - F(d[1])
    det = (
        (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
        + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
        + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
    )
    return (det > 0) - (det < 0)


def _hilbert_key(ix, iy, order):
    side = 1 << order
    d = np.zeros_like(ix)
    x = ix.copy()
    y = iy.copy()
    s = side >> 1
    while s > 0:
        rx = ((x & s) > 0).astype(np.int64)
        ry = ((y & s) > 0).astype(np.int64)
        d += s * s * ((3 * rx) ^ ry)
        # rotate quadrant
        flip = ry == 0
        swap_refl = flip & (rx == 1)
        x = np.where(swap_refl, side - 1 - x, x)
        y = np.where(swap_refl, side - 1 - y, y)
        x, y = np.where(flip, y, x), np.where(flip, x, y)
        s >>= 1
    return d


def hilbert_order(points: np.ndarray, order: int = 16) -> np.ndarray:
    lo = points.min(axis=0)
    span = float((points.max(axis=0) - lo).max()) or 1.0
    g = ((points - lo) / span * ((1 << order) - 1)).astype(np.int64)
    key = _hilbert_key(g[:, 0], g[:, 1], order)
    return np.argsort(key, kind="stable")


class _Triangulation:
    def __init__(self, pts):
        self.p = pts
        self.v: list[list[int]] = []
        self.n: list[list[int]] = []
        self.alive: list[bool] = []
        self.free: list[int] = []
        self.last = 0

    def new(self, a, b, c):
        if self.free:
            t = self.free.pop()
            self.v[t] = [a, b, c]
            self.n[t] = [-1, -1, -1]
            self.alive[t] = True
        else:
            t = len(self.v)
            self.v.append([a, b, c])
            self.n.append([-1, -1, -1])
            self.alive.append(True)
        return t

    def kill(self, t):
        self.alive[t] = False
        self.free.append(t)

    def contains(self, t, q) -> bool:
        a, b, c = self.v[t]
        p = self.p
        if c == GHOST:
            o = orient2d(p[a], p[b], q)
            if o != 0:
                return o > 0
            # on the hull line: inside only on the open segment
            pa, pb = p[a], p[b]
            return min(pa[0], pb[0]) <= q[0] <= max(pa[0], pb[0]) and min(pa[1], pb[1]) <= q[1] <= max(
                pa[1], pb[1]
            )
        return incircle(p[a], p[b], p[c], q) > 0

    def locate(self, q):
        p = self.p
        t = self.last
        if not self.alive[t] or self.v[t][2] == GHOST:
            t = next(i for i, ok in enumerate(self.alive) if ok and self.v[i][2] != GHOST)
        for _ in range(4 * len(self.v) + 8):
            v = self.v[t]
            if v[2] == GHOST:
                return t
            for i in range(3):
                if orient2d(p[v[i]], p[v[(i + 1) % 3]], q) < 0:
                    t = self.n[t][i]
                    break
            else:
                return t
        raise RuntimeError("point location did not converge")

    def insert(self, k):
        q = self.p[k]
        start = self.locate(q)
        cavity = {start}
        stack = [start]
        rejected = set()
        boundary = []
        while stack:
            t = stack.pop()
            for i in range(3):
                nb = self.n[t][i]
                if nb in cavity:
                    continue
                if nb not in rejected and self.contains(nb, q):
                    cavity.add(nb)
                    stack.append(nb)
                else:
                    rejected.add(nb)
                    boundary.append((t, i, nb))
        # an edge rejected early may still face a triangle added later
        boundary = [(t, i, nb) for t, i, nb in boundary if nb not in cavity]

        spokes: dict[tuple[int, int], tuple[int, int]] = {}
        made = None
        for t, i, nb in boundary:
            u = self.v[t][i]
            w = self.v[t][(i + 1) % 3]
            if u == GHOST:
                tri, e = self.new(w, k, GHOST), 2
            elif w == GHOST:
                tri, e = self.new(k, u, GHOST), 1
            else:
                tri, e = self.new(u, w, k), 0
                made = tri
            self.n[tri][e] = nb
            nv = self.v[nb]
            for j in range(3):
                if nv[j] == w and nv[(j + 1) % 3] == u:
                    self.n[nb][j] = tri
                    break
            tv = self.v[tri]
            for j in range(3):
                if j == e:
                    continue
                a, b = tv[j], tv[(j + 1) % 3]
                other = spokes.pop((b, a), None)
                if other is None:
                    spokes[(a, b)] = (tri, j)
                else:
                    ot, oj = other
                    self.n[tri][j] = ot
                    self.n[ot][oj] = tri
        for t in cavity:
            self.kill(t)
        if made is not None:
            self.last = made


def delaunay(points) -> np.ndarray:
    """Delaunay triangles (CCW vertex triples) of a 2-D point set.

    Raises ``ValueError`` on duplicate points or when all points are
    collinear.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 2)
    if len(pts) < 3:
        raise ValueError("need at least three points")
    if len(np.unique(pts, axis=0)) != len(pts):
        raise ValueError("duplicate points")
    order = hilbert_order(pts)
    plist = [tuple(map(float, q)) for q in pts]

    a, b = int(order[0]), int(order[1])
    third = None
    for pos in range(2, len(order)):
        c = int(order[pos])
        o = orient2d(plist[a], plist[b], plist[c])
        if o != 0:
            third = pos
            if o < 0:
                a, b = b, a
            break
    if third is None:
        raise ValueError("all points are collinear")
    c = int(order[third])

    tri = _Triangulation(plist)
    t0 = tri.new(a, b, c)
    g = [tri.new(b, a, GHOST), tri.new(c, b, GHOST), tri.new(a, c, GHOST)]
    tri.n[t0] = [g[0], g[1], g[2]]
    # ghost (x, y, G): edge 0 = (x, y), edge 1 = (y, G), edge 2 = (G, x)
    tri.n[g[0]] = [t0, g[2], g[1]]
    tri.n[g[1]] = [t0, g[0], g[2]]
    tri.n[g[2]] = [t0, g[1], g[0]]
    tri.last = t0

    for pos in range(2, len(order)):
        if pos == third:
            continue
        tri.insert(int(order[pos]))

    out = [v for v, ok in zip(tri.v, tri.alive) if ok and v[2] != GHOST]
    out.sort()
    return np.array(out, dtype=np.int64).reshape(-1, 3)
