"""ASCII PLY triangle meshes and solid voxelization.

Voxelization casts one ray per (y, z) voxel-center row along +x and
fills between successive surface crossings (even-odd rule).  Rays are
jittered by a tiny deterministic offset so they never graze triangle
edges; if any ray still sees an odd crossing count after retrying with
alternative jitters, the mesh is reported as non-watertight.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import FormatError, ParameterError, VoxelizationError
from .grid import BinaryGrid

DEFAULT_RESOLUTION = 150

_JITTERS = (3.1e-4, -2.7e-4, 1.3e-4)


@dataclass(frozen=True)
class TriangleMesh:
    vertices: np.ndarray  # (V, 3) float64, columns x, y, z
    faces: np.ndarray  # (F, 3) int64

    def __post_init__(self):
        if not np.isfinite(self.vertices).all():
            raise ParameterError("mesh has non-finite vertex coordinates")
        f = self.faces
        if len(f) and (
            (f < 0).any()
            or (f >= len(self.vertices)).any()
            or (f[:, 0] == f[:, 1]).any()
            or (f[:, 1] == f[:, 2]).any()
            or (f[:, 0] == f[:, 2]).any()
        ):
            raise ParameterError("mesh has out-of-range or degenerate faces")


def parse_ply(path):
    """Parse an ASCII PLY file with triangular faces."""
    with open(path, "r", errors="replace") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != "ply":
        raise FormatError("not a PLY file (missing 'ply' magic)", line=1)
    n_vertex = n_face = None
    vertex_props = []
    current_element = None
    body_start = None
    is_ascii = False
    for ln, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if not tokens or tokens[0] == "comment":
            continue
        if tokens[0] == "format":
            if len(tokens) < 2 or tokens[1] != "ascii":
                raise FormatError("only ASCII PLY is supported", line=ln)
            is_ascii = True
        elif tokens[0] == "element":
            current_element = tokens[1]
            if tokens[1] == "vertex":
                n_vertex = int(tokens[2])
            elif tokens[1] == "face":
                n_face = int(tokens[2])
        elif tokens[0] == "property" and current_element == "vertex":
            if tokens[1] != "list":
                vertex_props.append(tokens[-1])
        elif tokens[0] == "end_header":
            body_start = ln
            break
    if not is_ascii:
        raise FormatError("only ASCII PLY is supported", line=1)
    if body_start is None or n_vertex is None or n_face is None:
        raise FormatError("incomplete PLY header", line=len(lines))
    try:
        ix, iy, iz = (vertex_props.index(a) for a in ("x", "y", "z"))
    except ValueError:
        raise FormatError("vertex element lacks x/y/z properties", line=body_start) from None

    body = lines[body_start:]
    if len(body) < n_vertex + n_face:
        raise FormatError(
            f"element count mismatch: header declares {n_vertex} vertices and "
            f"{n_face} faces but only {len(body)} data lines follow",
            line=len(lines),
        )
    vertices = np.zeros((n_vertex, 3), dtype=np.float64)
    for i in range(n_vertex):
        tokens = body[i].split()
        if len(tokens) < len(vertex_props):
            raise FormatError("short vertex line", line=body_start + 1 + i)
        try:
            vertices[i] = [float(tokens[ix]), float(tokens[iy]), float(tokens[iz])]
        except ValueError:
            raise FormatError("non-numeric vertex coordinate", line=body_start + 1 + i) from None
    faces = np.zeros((n_face, 3), dtype=np.int64)
    for i in range(n_face):
        ln = body_start + 1 + n_vertex + i
        tokens = body[n_vertex + i].split()
        if not tokens:
            raise FormatError("empty face line", line=ln)
        count = int(tokens[0])
        if count != 3:
            raise FormatError(f"unsupported face arity {count} (triangles only)", line=ln)
        if len(tokens) < 4:
            raise FormatError("short face line", line=ln)
        idx = [int(t) for t in tokens[1:4]]
        if any(k < 0 or k >= n_vertex for k in idx):
            raise FormatError(f"vertex index out of range in face: {idx}", line=ln)
        faces[i] = idx
    return TriangleMesh(vertices=vertices, faces=faces)


def _ray_crossings(verts, faces, ys, zs):
    """x of every ray/triangle crossing; rays at (ys[j], zs[j]) along +x.

    Returns (ray_index array, x array) over all crossings.
    """
    tri = verts[faces]  # (F, 3, 3) columns x, y, z
    ray_ids, xs = [], []
    for t in range(len(tri)):
        p0, p1, p2 = tri[t]
        # Project on (y, z); degenerate projections belong to triangles
        # parallel to the ray and never produce crossings.
        v1 = p1[1:] - p0[1:]
        v2 = p2[1:] - p0[1:]
        det = v1[0] * v2[1] - v1[1] * v2[0]
        if abs(det) < 1e-14:
            continue
        ymin, ymax = min(p0[1], p1[1], p2[1]), max(p0[1], p1[1], p2[1])
        zmin, zmax = min(p0[2], p1[2], p2[2]), max(p0[2], p1[2], p2[2])
        sel = np.flatnonzero((ys >= ymin) & (ys <= ymax) & (zs >= zmin) & (zs <= zmax))
        if len(sel) == 0:
            continue
        dy = ys[sel] - p0[1]
        dz = zs[sel] - p0[2]
        a = (dy * v2[1] - dz * v2[0]) / det
        b = (dz * v1[0] - dy * v1[1]) / det
        inside = (a > 0) & (b > 0) & (a + b < 1)
        if not inside.any():
            continue
        hit = sel[inside]
        x = p0[0] + a[inside] * (p1[0] - p0[0]) + b[inside] * (p2[0] - p0[0])
        ray_ids.append(hit)
        xs.append(x)
    if not ray_ids:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    return np.concatenate(ray_ids), np.concatenate(xs)


def voxelize(mesh, resolution=DEFAULT_RESOLUTION):
    """Solid voxelization of a closed mesh onto a cubic-cell grid.

    The mesh is scaled uniformly so its longest axis spans
    ``resolution - 2`` cells, leaving a one-voxel background margin.
    """
    if resolution < 8:
        raise ParameterError(f"resolution must be >= 8, got {resolution}")
    if len(mesh.faces) == 0:
        raise ParameterError("cannot voxelize a mesh without faces")
    lo = mesh.vertices.min(axis=0)
    hi = mesh.vertices.max(axis=0)
    extent = float((hi - lo).max())
    if extent <= 0:
        raise ParameterError("mesh has zero extent")
    scale = (resolution - 3) / extent
    verts = (mesh.vertices - lo) * scale + 1.0  # columns x, y, z in voxel units
    dims_xyz = np.ceil((hi - lo) * scale).astype(int) + 3
    nx, ny, nz = (int(v) for v in dims_xyz)

    yy, zz = np.meshgrid(np.arange(ny, dtype=np.float64), np.arange(nz, dtype=np.float64), indexing="ij")
    ray_y = yy.ravel()
    ray_z = zz.ravel()
    mask = None
    for jit in _JITTERS:
        rid, xs = _ray_crossings(verts, mesh.faces, ray_y + jit, ray_z + jit * 0.61803)
        candidate = np.zeros((nz, ny, nx), dtype=bool)
        order = np.lexsort((xs, rid))
        rid, xs = rid[order], xs[order]
        ok = True
        start = 0
        while start < len(rid):
            stop = start
            while stop < len(rid) and rid[stop] == rid[start]:
                stop += 1
            hits = xs[start:stop]
            if len(hits) % 2 != 0:
                ok = False
                break
            ry = int(rid[start]) // nz
            rz = int(rid[start]) % nz
            for k in range(0, len(hits), 2):
                a = int(np.ceil(hits[k]))
                b = int(np.floor(hits[k + 1]))
                if b >= a:
                    candidate[rz, ry, max(0, a) : min(nx, b + 1)] = True
            start = stop
        if ok:
            mask = candidate
            break
    if mask is None:
        raise VoxelizationError("ray-parity inconsistency: mesh does not appear watertight")
    if mask.any():
        labels, n = ndimage.label(mask, structure=np.ones((3, 3, 3), bool))
        if n > 1:
            counts = np.bincount(labels.ravel())
            counts[0] = 0
            mask = labels == counts.argmax()
    return BinaryGrid(mask)
