"""SVG rendering of small triangle and polygon meshes."""

from __future__ import annotations

import numpy as np

from .errors import TooLarge
from .mesh import PolyMesh, TriMesh

DEFAULT_MAX_ELEMENTS = 20000
PALETTE = ("#cfe3f5", "#f7dcc4", "#d8efd0", "#eedcf2", "#f5f0c2", "#d5ecec")


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def render_svg(mesh: TriMesh | PolyMesh, max_elements: int = DEFAULT_MAX_ELEMENTS, width: int = 800) -> str:
    """SVG text with one filled ``<polygon>`` per face and one stroked ``<path>`` of edges.

    For a :class:`PolyMesh` the faces are the polygons (ordered by seed) and
    the stroked edges are the frontier edges; for a :class:`TriMesh` they are
    the triangles and all edges. Output depends only on the mesh.
    """
    if isinstance(mesh, PolyMesh):
        faces = [mesh.polygon(int(s)) for s in sorted(mesh.seeds.tolist())]
        edge_mask = mesh.frontier
    else:
        faces = mesh.triangles().tolist()
        edge_mask = np.ones(mesh.n_halfedges, dtype=bool)
    if len(faces) > max_elements:
        raise TooLarge(f"mesh has {len(faces)} faces, more than max_elements={max_elements}")

    xy = mesh.xy
    lo = xy.min(axis=0) if len(xy) else np.zeros(2)
    hi = xy.max(axis=0) if len(xy) else np.ones(2)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-12))
    margin = 10.0
    scale = (width - 2 * margin) / span
    height = int(np.ceil((hi[1] - lo[1]) * scale + 2 * margin))
    px = (xy[:, 0] - lo[0]) * scale + margin
    py = height - ((xy[:, 1] - lo[1]) * scale + margin)

    def pt(v):
        return f"{_fmt(px[v])},{_fmt(py[v])}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        '<g class="faces" stroke="none">',
    ]
    for i, verts in enumerate(faces):
        fill = PALETTE[i % len(PALETTE)]
        out.append(f'<polygon class="face" data-arity="{len(verts)}" fill="{fill}" points="{" ".join(pt(v) for v in verts)}"/>')
    out.append("</g>")

    keep = edge_mask & ((mesh.origin < mesh.origin[mesh.twin]) | mesh.is_border)
    keep &= ~mesh.is_border[mesh.twin] | mesh.is_border
    segs = [f"M{pt(mesh.origin[e])}L{pt(mesh.origin[mesh.twin[e]])}" for e in np.flatnonzero(keep).tolist()]
    out.append(f'<path class="edges" fill="none" stroke="#223" stroke-width="1" d="{"".join(segs)}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(mesh: TriMesh | PolyMesh, path, max_elements: int = DEFAULT_MAX_ELEMENTS) -> None:
    text = render_svg(mesh, max_elements)
    with open(path, "w") as fh:
        fh.write(text)
