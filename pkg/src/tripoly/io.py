"""Text mesh formats.

``.node`` / ``.ele``
    Triangle's formats. Node header ``<#points> 2 <#attrs> <#markers>``,
    then ``<index> <x> <y> [attrs] [marker]``. Ele header
    ``<#triangles> 3 <#attrs>``, then ``<index> <a> <b> <c> [attrs]``.
    The numbering base (0 or 1) is taken from the first node index.
    ``#`` starts a comment.
``.off``
    Polygon output: ``OFF``, ``<#vertices> <#faces> 0``, one ``x y 0`` line
    per vertex, then one ``k v0 ... v(k-1)`` line per polygon. Each cycle is
    CCW and starts at its smallest vertex index; faces are ordered by seed.
    Triangle-only OFF files can be read back as triangulations.
``.hedump``
    Raw half-edge arrays, see :func:`write_hedump`.

Floats are written with ``repr`` (shortest round-trip form).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import IndexBaseAmbiguous, ParseError, VersionMismatch
from .mesh import PolyMesh, TriMesh, build_from_triangles

HEDUMP_VERSION = 1


def _records(path):
    """Yield ``(line_number, tokens)`` for non-empty, non-comment lines."""
    with open(path) as fh:
        for no, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].split()
            if text:
                yield no, text


def _ints(tokens, path, no, what):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integer {what}, got {' '.join(tokens)!r}", path, no) from None


def _floats(tokens, path, no, what):
    try:
        return [float(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected number {what}, got {' '.join(tokens)!r}", path, no) from None


def _take(it, path, what):
    try:
        return next(it)
    except StopIteration:
        raise ParseError(f"unexpected end of file, expected {what}", path) from None


def read_node(path) -> tuple[np.ndarray, int]:
    """Points of a ``.node`` file and the numbering base it uses."""
    it = _records(path)
    no, head = _take(it, path, "node header")
    if len(head) < 2:
        raise ParseError("node header needs '<#points> 2 [<#attrs> <#markers>]'", path, no)
    hv = _ints(head[:4], path, no, "in node header")
    n, dim = hv[0], hv[1]
    n_attr = hv[2] if len(hv) > 2 else 0
    n_mark = hv[3] if len(hv) > 3 else 0
    if dim != 2:
        raise ParseError(f"only 2-D nodes are supported, header says {dim}", path, no, 2)
    pts = np.empty((n, 2), dtype=np.float64)
    base = None
    for k in range(n):
        no, tok = _take(it, path, f"node {k} of {n}")
        if len(tok) < 3 + n_attr + n_mark:
            raise ParseError(f"node line has {len(tok)} fields, expected {3 + n_attr + n_mark}", path, no)
        (idx,) = _ints(tok[:1], path, no, "node index")
        if base is None:
            if idx not in (0, 1):
                raise ParseError(f"first node index must be 0 or 1, got {idx}", path, no, 1)
            base = idx
        if idx != k + base:
            raise ParseError(f"node index {idx} out of sequence, expected {k + base}", path, no, 1)
        pts[k] = _floats(tok[1:3], path, no, "coordinate")
    return pts, base if base is not None else 0


def read_ele(path, n_points: int, base: int) -> np.ndarray:
    it = _records(path)
    no, head = _take(it, path, "ele header")
    hv = _ints(head[:3], path, no, "in ele header")
    if len(hv) < 2:
        raise ParseError("ele header needs '<#triangles> 3 [<#attrs>]'", path, no)
    m, per = hv[0], hv[1]
    if per != 3:
        raise ParseError(f"only 3-node triangles are supported, header says {per}", path, no, 2)
    tris = np.empty((m, 3), dtype=np.int64)
    for k in range(m):
        no, tok = _take(it, path, f"triangle {k} of {m}")
        if len(tok) < 4:
            raise ParseError(f"triangle line has {len(tok)} fields, expected at least 4", path, no)
        tris[k] = _ints(tok[1:4], path, no, "vertex index")
    if m:
        lo, hi = int(tris.min()), int(tris.max())
        if lo < base or hi >= n_points + base:
            if (lo == 0 and hi == n_points) or (base == 1 and lo == 0) or (base == 0 and hi == n_points):
                raise IndexBaseAmbiguous(
                    f"triangle indices span [{lo}, {hi}] for {n_points} nodes numbered from {base}", path
                )
            raise ParseError(f"triangle index outside [{base}, {n_points + base - 1}]", path)
    return tris - base


def read_node_ele(node_path, ele_path=None) -> tuple[np.ndarray, np.ndarray]:
    node_path = Path(node_path)
    ele_path = Path(ele_path) if ele_path is not None else node_path.with_suffix(".ele")
    for p in (node_path, ele_path):
        if not p.exists():
            raise FileNotFoundError(f"no such file: {p}")
    pts, base = read_node(node_path)
    return pts, read_ele(ele_path, len(pts), base)


def write_node_ele(points, triangles, node_path, ele_path=None, base: int = 0) -> None:
    node_path = Path(node_path)
    ele_path = Path(ele_path) if ele_path is not None else node_path.with_suffix(".ele")
    pts = np.asarray(points, dtype=np.float64)
    tris = np.asarray(triangles, dtype=np.int64)
    with open(node_path, "w") as fh:
        fh.write(f"{len(pts)} 2 0 0\n")
        for k, (x, y) in enumerate(pts.tolist()):
            fh.write(f"{k + base} {x!r} {y!r}\n")
    with open(ele_path, "w") as fh:
        fh.write(f"{len(tris)} 3 0\n")
        for k, (a, b, c) in enumerate(tris.tolist()):
            fh.write(f"{k + base} {a + base} {b + base} {c + base}\n")


def read_off(path) -> tuple[np.ndarray, np.ndarray]:
    """Vertices and triangles of an OFF file whose faces are all triangles."""
    it = _records(path)
    no, head = _take(it, path, "OFF header")
    if head[0] != "OFF":
        raise ParseError(f"expected 'OFF', got {head[0]!r}", path, no, 1)
    counts = head[1:]
    if not counts:
        no, counts = _take(it, path, "OFF counts")
    nv, nf = _ints(counts[:2], path, no, "in OFF counts")
    pts = np.empty((nv, 2), dtype=np.float64)
    for k in range(nv):
        no, tok = _take(it, path, f"vertex {k} of {nv}")
        if len(tok) < 2:
            raise ParseError("vertex line needs at least x and y", path, no)
        pts[k] = _floats(tok[:2], path, no, "coordinate")
    tris = np.empty((nf, 3), dtype=np.int64)
    for k in range(nf):
        no, tok = _take(it, path, f"face {k} of {nf}")
        vals = _ints(tok, path, no, "face entry")
        if vals[0] != 3 or len(vals) < 4:
            raise ParseError(f"face {k} is not a triangle", path, no, 1)
        tris[k] = vals[1:4]
    if nf and (tris.min() < 0 or tris.max() >= nv):
        raise ParseError(f"face index outside [0, {nv - 1}]", path)
    return pts, tris


def off_faces(polymesh: PolyMesh) -> list[list[int]]:
    faces = []
    for s in sorted(int(s) for s in polymesh.seeds):
        verts = polymesh.polygon(s)
        i = verts.index(min(verts))
        faces.append(verts[i:] + verts[:i])
    return faces


def write_poly_off(polymesh: PolyMesh, path) -> None:
    faces = off_faces(polymesh)
    with open(path, "w") as fh:
        fh.write("OFF\n")
        fh.write(f"{polymesh.n_vertices} {len(faces)} 0\n")
        for x, y in polymesh.xy.tolist():
            fh.write(f"{x!r} {y!r} 0\n")
        for f in faces:
            fh.write(f"{len(f)} {' '.join(map(str, f))}\n")


def read_poly_off(path) -> tuple[np.ndarray, list[list[int]]]:
    it = _records(path)
    no, head = _take(it, path, "OFF header")
    if head[0] != "OFF":
        raise ParseError(f"expected 'OFF', got {head[0]!r}", path, no, 1)
    counts = head[1:] or _take(it, path, "OFF counts")[1]
    nv, nf = _ints(counts[:2], path, no, "in OFF counts")
    pts = np.empty((nv, 2), dtype=np.float64)
    for k in range(nv):
        no, tok = _take(it, path, f"vertex {k} of {nv}")
        pts[k] = _floats(tok[:2], path, no, "coordinate")
    faces = []
    for k in range(nf):
        no, tok = _take(it, path, f"face {k} of {nf}")
        vals = _ints(tok, path, no, "face entry")
        if vals[0] != len(vals) - 1:
            raise ParseError(f"face {k} declares {vals[0]} vertices but lists {len(vals) - 1}", path, no, 1)
        faces.append(vals[1:])
    return pts, faces


def write_hedump(mesh: TriMesh | PolyMesh, path) -> None:
    """Dump vertex and half-edge records verbatim.

    Layout::

        HEDUMP 1
        kind trimesh|polymesh
        vertices <n>
        <x> <y> <is_border> <incident_halfedge>      (n lines)
        halfedges <m> <n_faces>
        <origin> <twin> <next> <prev> <is_border>    (m lines)
        seeds <k>                                    (polymesh only)
        <seed>                                       (k lines)
        frontier <m>                                 (polymesh only)
        <m characters of 0/1>
    """
    poly = isinstance(mesh, PolyMesh)
    with open(path, "w") as fh:
        fh.write(f"HEDUMP {HEDUMP_VERSION}\n")
        fh.write(f"kind {'polymesh' if poly else 'trimesh'}\n")
        fh.write(f"vertices {mesh.n_vertices}\n")
        for (x, y), b, h in zip(mesh.xy.tolist(), mesh.vertex_border.tolist(), mesh.vertex_halfedge.tolist()):
            fh.write(f"{x!r} {y!r} {int(b)} {h}\n")
        fh.write(f"halfedges {mesh.n_halfedges} {mesh.n_faces}\n")
        cols = zip(mesh.origin.tolist(), mesh.twin.tolist(), mesh.next.tolist(), mesh.prev.tolist(),
                   mesh.is_border.tolist())
        for o, t, n, p, b in cols:
            fh.write(f"{o} {t} {n} {p} {int(b)}\n")
        if poly:
            fh.write(f"seeds {len(mesh.seeds)}\n")
            for s in mesh.seeds.tolist():
                fh.write(f"{s}\n")
            fh.write(f"frontier {mesh.n_halfedges}\n")
            fh.write("".join("1" if b else "0" for b in mesh.frontier.tolist()) + "\n")


def _keyword(it, path, word, nargs):
    no, tok = _take(it, path, f"'{word}' line")
    if tok[0] != word or len(tok) != nargs + 1:
        raise ParseError(f"expected '{word}' with {nargs} value(s), got {' '.join(tok)!r}", path, no, 1)
    return _ints(tok[1:], path, no, f"after '{word}'") if nargs else []


def _bit(token, path, no, col):
    if token not in ("0", "1"):
        raise ParseError(f"expected 0 or 1, got {token!r}", path, no, col)
    return token == "1"


def read_hedump(path) -> TriMesh | PolyMesh:
    it = _records(path)
    no, tok = _take(it, path, "HEDUMP header")
    if tok[0] != "HEDUMP" or len(tok) != 2:
        raise ParseError("missing 'HEDUMP <version>' header", path, no, 1)
    if tok[1] != str(HEDUMP_VERSION):
        raise VersionMismatch(f"unsupported hedump version {tok[1]!r}, expected {HEDUMP_VERSION}", path, no, 2)
    no, tok = _take(it, path, "kind line")
    if tok[0] != "kind" or len(tok) != 2 or tok[1] not in ("trimesh", "polymesh"):
        raise ParseError("expected 'kind trimesh' or 'kind polymesh'", path, no, 1)
    poly = tok[1] == "polymesh"

    (nv,) = _keyword(it, path, "vertices", 1)
    xy = np.empty((nv, 2), dtype=np.float64)
    vborder = np.empty(nv, dtype=np.bool_)
    vhe = np.empty(nv, dtype=np.int64)
    for k in range(nv):
        no, tok = _take(it, path, f"vertex {k} of {nv}")
        if len(tok) != 4:
            raise ParseError(f"vertex record needs 4 fields, got {len(tok)}", path, no)
        xy[k] = _floats(tok[:2], path, no, "coordinate")
        vborder[k] = _bit(tok[2], path, no, 3)
        vhe[k] = _ints(tok[3:], path, no, "incident half-edge")[0]

    m, nf = _keyword(it, path, "halfedges", 2)
    if not 0 <= 3 * nf <= m:
        raise ParseError(f"face count {nf} does not fit {m} half-edges", path)
    rec = np.empty((m, 4), dtype=np.int64)
    border = np.empty(m, dtype=np.bool_)
    for k in range(m):
        no, tok = _take(it, path, f"half-edge {k} of {m}")
        if len(tok) != 5:
            raise ParseError(f"half-edge record needs 5 fields, got {len(tok)}", path, no)
        vals = _ints(tok[:4], path, no, "half-edge field")
        for col, (v, hi, name) in enumerate(zip(vals, (nv, m, m, m), ("origin", "twin", "next", "prev")), 1):
            if not 0 <= v < hi:
                raise ParseError(f"{name} index {v} outside [0, {hi - 1}]", path, no, col)
        rec[k] = vals
        border[k] = _bit(tok[4], path, no, 5)
    for k in range(nv):
        if not -1 <= vhe[k] < m:
            raise ParseError(f"vertex {k} incident half-edge {vhe[k]} outside [0, {m - 1}]", path)

    arrays = dict(
        xy=xy,
        vertex_border=vborder,
        vertex_halfedge=vhe,
        origin=np.ascontiguousarray(rec[:, 0]),
        twin=np.ascontiguousarray(rec[:, 1]),
        next=np.ascontiguousarray(rec[:, 2]),
        prev=np.ascontiguousarray(rec[:, 3]),
        is_border=border,
        n_faces=nf,
    )
    if not poly:
        return TriMesh(**arrays)

    (k,) = _keyword(it, path, "seeds", 1)
    seeds = np.empty(k, dtype=np.int64)
    for i in range(k):
        no, tok = _take(it, path, f"seed {i} of {k}")
        (s,) = _ints(tok[:1], path, no, "seed")
        if not 0 <= s < m:
            raise ParseError(f"seed {s} outside [0, {m - 1}]", path, no, 1)
        seeds[i] = s
    (mf,) = _keyword(it, path, "frontier", 1)
    if mf != m:
        raise ParseError(f"frontier length {mf} differs from half-edge count {m}", path)
    frontier = np.zeros(m, dtype=np.bool_)
    if m:
        no, tok = _take(it, path, "frontier bits")
        bits = tok[0]
        if len(tok) != 1 or len(bits) != m or set(bits) - {"0", "1"}:
            raise ParseError(f"frontier line must hold {m} characters of 0/1", path, no, 1)
        frontier = np.frombuffer(bits.encode(), dtype=np.uint8) == ord("1")
    return PolyMesh(**arrays, seeds=seeds, frontier=frontier.copy())


FORMATS = ("node_ele", "off", "poly_off", "hedump")


def infer_format(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".node", ".ele"):
        return "node_ele"
    if suffix == ".off":
        return "off"
    if suffix == ".hedump":
        return "hedump"
    raise ValueError(f"cannot infer mesh format from {path!s}; pass a format explicitly")


def read_mesh(path, fmt: str | None = None) -> TriMesh | PolyMesh:
    """Load a triangulation (or a dumped polygon mesh) from disk."""
    path = Path(path)
    fmt = fmt or infer_format(path)
    if fmt == "node_ele":
        node = path.with_suffix(".node")
        return build_from_triangles(*read_node_ele(node, path.with_suffix(".ele")))
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    if fmt == "off":
        return build_from_triangles(*read_off(path))
    if fmt == "hedump":
        return read_hedump(path)
    raise ValueError(f"cannot read triangulations in format {fmt!r}")
