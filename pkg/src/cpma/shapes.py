"""Synthetic 2D/3D test shapes used by the fixture suite and demos.

All generators return padded BinaryGrids on a canvas of the requested
size; polygon shapes are rasterized with an even-odd scanline fill.
"""

import numpy as np

from .grid import BinaryGrid, ensure_border


def _canvas(dims):
    return np.zeros(dims, dtype=bool)


def disc(size=128, radius=None, center=None):
    if radius is None:
        radius = size // 4
    if center is None:
        center = (size / 2 - 0.5, size / 2 - 0.5)
    yy, xx = np.mgrid[0:size, 0:size]
    mask = (yy - center[0]) ** 2 + (xx - center[1]) ** 2 <= radius * radius
    return ensure_border(BinaryGrid(mask))


def rectangle(size=128, height=28, width=90):
    mask = _canvas((size, size))
    y0 = (size - height) // 2
    x0 = (size - width) // 2
    mask[y0 : y0 + height, x0 : x0 + width] = True
    return ensure_border(BinaryGrid(mask))


def rectangle_with_bump(size=128, height=28, width=90, bump=3):
    """Rectangle with a small boundary bump that induces a spurious branch."""
    base = rectangle(size, height, width).data.copy()
    y0 = (size - height) // 2
    xc = size // 2 + width // 4
    base[y0 - bump : y0, xc - 1 : xc + 2] = True
    return ensure_border(BinaryGrid(base))


def l_shape(size=128, arm=84, thickness=26):
    mask = _canvas((size, size))
    y0 = (size - arm) // 2
    x0 = (size - arm) // 2
    mask[y0 : y0 + arm, x0 : x0 + thickness] = True
    mask[y0 + arm - thickness : y0 + arm, x0 : x0 + arm] = True
    return ensure_border(BinaryGrid(mask))


def fill_polygon(size, vertices):
    """Even-odd scanline rasterization of a closed polygon.

    ``vertices`` is a sequence of (y, x) floats; cells whose centers are
    inside the polygon become foreground.
    """
    verts = np.asarray(vertices, dtype=np.float64)
    mask = _canvas((size, size))
    n = len(verts)
    for y in range(size):
        crossings = []
        for k in range(n):
            y0, x0 = verts[k]
            y1, x1 = verts[(k + 1) % n]
            if (y0 <= y < y1) or (y1 <= y < y0):
                t = (y - y0) / (y1 - y0)
                crossings.append(x0 + t * (x1 - x0))
        crossings.sort()
        for k in range(0, len(crossings) - 1, 2):
            a = int(np.ceil(crossings[k]))
            b = int(np.floor(crossings[k + 1]))
            if b >= a:
                mask[y, max(0, a) : min(size, b + 1)] = True
    return mask


def star(size=128, points=5, r_outer=None, r_inner=None):
    if r_outer is None:
        r_outer = size * 0.42
    if r_inner is None:
        r_inner = r_outer * 0.45
    c = (size - 1) / 2
    verts = []
    for k in range(2 * points):
        r = r_outer if k % 2 == 0 else r_inner
        ang = np.pi * k / points - np.pi / 2 + 0.03  # slight twist avoids lattice-degenerate spikes
        verts.append((c + r * np.sin(ang), c + r * np.cos(ang)))
    return ensure_border(BinaryGrid(fill_polygon(size, verts)))


def quadruped(size=128):
    """Horse-like polygon: a body with four legs, a neck and a head."""
    # Hand-placed outline in a unit box (y down), scaled to the canvas.
    outline = [
        (0.35, 0.08), (0.30, 0.22), (0.32, 0.70), (0.22, 0.78), (0.10, 0.82),
        (0.08, 0.94), (0.20, 0.92), (0.30, 0.88), (0.42, 0.86), (0.55, 0.84),
        (0.88, 0.86), (0.88, 0.80), (0.62, 0.78), (0.60, 0.70), (0.88, 0.72),
        (0.88, 0.66), (0.60, 0.62), (0.58, 0.30), (0.88, 0.32), (0.88, 0.26),
        (0.60, 0.22), (0.88, 0.18), (0.88, 0.12), (0.55, 0.12), (0.45, 0.06),
    ]
    verts = [(y * size * 0.9 + size * 0.05, x * size * 0.9 + size * 0.05) for y, x in outline]
    return ensure_border(BinaryGrid(fill_polygon(size, verts)))


def blob_2d(size=128, seed=7, n_lobes=6):
    """Smooth random blob: union of overlapping discs around the center."""
    rng = np.random.Generator(np.random.PCG64(seed))
    c = (size - 1) / 2
    yy, xx = np.mgrid[0:size, 0:size]
    mask = (yy - c) ** 2 + (xx - c) ** 2 <= (size * 0.12) ** 2
    for _ in range(n_lobes):
        ang = rng.uniform(0, 2 * np.pi)
        dist = rng.uniform(size * 0.08, size * 0.22)
        r = rng.uniform(size * 0.07, size * 0.14)
        cy, cx = c + dist * np.sin(ang), c + dist * np.cos(ang)
        mask |= (yy - cy) ** 2 + (xx - cx) ** 2 <= r * r
    return ensure_border(BinaryGrid(mask))


def box_3d(size=48, extents=(30, 20, 12)):
    mask = _canvas((size, size, size))
    starts = [(size - e) // 2 for e in extents]
    sl = tuple(slice(s, s + e) for s, e in zip(starts, extents))
    mask[sl] = True
    return ensure_border(BinaryGrid(mask))


def l_prism(size=48, arm=34, thickness=10, depth=12):
    """L-shaped cross-section extruded along z."""
    mask = _canvas((size, size, size))
    z0 = (size - depth) // 2
    y0 = (size - arm) // 2
    x0 = (size - arm) // 2
    mask[z0 : z0 + depth, y0 : y0 + arm, x0 : x0 + thickness] = True
    mask[z0 : z0 + depth, y0 + arm - thickness : y0 + arm, x0 : x0 + arm] = True
    return ensure_border(BinaryGrid(mask))


def cylinder(size=48, radius=10, height=30):
    zz, yy, xx = np.mgrid[0:size, 0:size, 0:size]
    c = (size - 1) / 2
    mask = ((yy - c) ** 2 + (xx - c) ** 2 <= radius * radius) & (np.abs(zz - c) <= height / 2)
    return ensure_border(BinaryGrid(mask))


def blob_3d(size=48, seed=11, n_lobes=5):
    rng = np.random.Generator(np.random.PCG64(seed))
    c = (size - 1) / 2
    zz, yy, xx = np.mgrid[0:size, 0:size, 0:size]
    mask = (zz - c) ** 2 + (yy - c) ** 2 + (xx - c) ** 2 <= (size * 0.16) ** 2
    for _ in range(n_lobes):
        d = rng.uniform(size * 0.08, size * 0.2, size=3) * rng.choice([-1, 1], size=3)
        r = rng.uniform(size * 0.08, size * 0.16)
        mask |= (zz - c - d[0]) ** 2 + (yy - c - d[1]) ** 2 + (xx - c - d[2]) ** 2 <= r * r
    return ensure_border(BinaryGrid(mask))


def random_blob_2d(size=64, seed=0):
    """Seeded random blob family for connectivity stress tests."""
    return blob_2d(size=size, seed=seed, n_lobes=7)


def cube_mesh():
    """Unit cube as 8 vertices / 12 triangles (consistent orientation)."""
    from .ply import TriangleMesh

    verts = np.array(
        [[x, y, z] for z in (0.0, 1.0) for y in (0.0, 1.0) for x in (0.0, 1.0)]
    )
    faces = np.array(
        [
            [0, 2, 1], [1, 2, 3],  # z = 0
            [4, 5, 6], [5, 7, 6],  # z = 1
            [0, 1, 4], [1, 5, 4],  # y = 0
            [2, 6, 3], [3, 6, 7],  # y = 1
            [0, 4, 2], [2, 4, 6],  # x = 0
            [1, 3, 5], [3, 7, 5],  # x = 1
        ],
        dtype=np.int64,
    )
    return TriangleMesh(vertices=verts, faces=faces)


def icosphere_mesh(subdivisions=3, radius=0.5):
    """Sphere approximated by a subdivided icosahedron."""
    from .ply import TriangleMesh

    phi = (1 + np.sqrt(5)) / 2
    verts = [
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [np.asarray(v, dtype=np.float64) for v in verts]

    def midpoint(cache, i, j):
        key = (min(i, j), max(i, j))
        if key not in cache:
            cache[key] = len(verts)
            verts.append((verts[i] + verts[j]) / 2)
        return cache[key]

    for _ in range(subdivisions):
        cache = {}
        new_faces = []
        for a, b, c in faces:
            ab = midpoint(cache, a, b)
            bc = midpoint(cache, b, c)
            ca = midpoint(cache, c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    v = np.array(verts)
    v = v / np.linalg.norm(v, axis=1, keepdims=True) * radius
    return TriangleMesh(vertices=v, faces=np.array(faces, dtype=np.int64))
