"""Boundary noise models and rotation operators for sensitivity studies.

2D noise deforms the traced contour with random protrusions and
indentations; 3D noise grows the surface by random accretion events.
Both models are driven by numpy's PCG64 generator, so a fixed seed gives
bit-identical output on every platform.

Rotations are nearest-neighbor resamplings about the grid center onto an
enlarged canvas; multiples of 90 degrees use exact integer arithmetic
and are pure coordinate permutations.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import ndimage

from .errors import DomainError, ParameterError
from .grid import BinaryGrid
from .skeleton import MedialAxisTransform

DEFAULT_P_DEFORM = 0.005


class NoiseKind(str, Enum):
    CONTOUR_2D = "contour2d"
    EDEN_3D = "eden3d"


@dataclass(frozen=True)
class NoiseSpec:
    """One noise model instance.

    level            -- how many times the single-level model is applied
    p_deform         -- per-contour-point deformation probability (2D)
    neighborhood     -- half-width, in contour samples, of each deformation
    events_per_level -- accretion events per level (3D); when None, 1% of
                        the boundary voxel count, at least 1
    """

    kind: NoiseKind
    level: int = 1
    seed: int = 0
    p_deform: float = DEFAULT_P_DEFORM
    neighborhood: int = 2
    events_per_level: int | None = None

    def __post_init__(self):
        if self.level < 0:
            raise ParameterError(f"noise level must be >= 0, got {self.level}")
        if not 0 < self.p_deform < 1:
            raise ParameterError(f"p_deform must be in (0, 1), got {self.p_deform}")
        if self.neighborhood < 0:
            raise ParameterError("neighborhood must be >= 0")
        if self.events_per_level is not None and self.events_per_level < 1:
            raise ParameterError("events_per_level must be >= 1")


@dataclass(frozen=True)
class RotationSpec:
    """2D angle or 3D azimuth/elevation pair, degrees, counterclockwise."""

    angle2d: float = 0.0
    azimuth: float = 0.0
    elevation: float = 0.0


def trace_contour(mask):
    """Ordered closed boundary of the largest component (Moore tracing).

    Returns an (L, 2) int array of (y, x) boundary cells in traversal
    order.  The mask must have a background border.
    """
    pts = np.argwhere(mask)
    if len(pts) == 0:
        raise DomainError("cannot trace the contour of an empty mask")
    start = tuple(pts[np.lexsort((pts[:, 1], pts[:, 0]))][0])
    # Moore neighborhood in clockwise order starting west.
    ring = [(0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1)]
    if len(pts) == 1:
        return np.array([start])
    contour = [start]
    # Entered the start cell coming from the west (scan order guarantees
    # the west neighbor is background).
    prev_dir = 0
    cur = start
    while True:
        found = False
        for k in range(1, 9):
            d = (prev_dir + k) % 8
            ny, nx = cur[0] + ring[d][0], cur[1] + ring[d][1]
            if 0 <= ny < mask.shape[0] and 0 <= nx < mask.shape[1] and mask[ny, nx]:
                nxt = (ny, nx)
                prev_dir = (d + 4) % 8  # direction pointing back at the cell we left
                cur = nxt
                found = True
                break
        if not found:  # isolated pixel
            break
        if cur == start and len(contour) > 1:
            break
        contour.append(cur)
        if len(contour) > 8 * len(pts):  # safety, should not happen
            break
    return np.array(contour)


def _largest_component(mask, ndim):
    structure = np.ones((3,) * ndim, dtype=bool)
    labels, n = ndimage.label(mask, structure=structure)
    if n <= 1:
        return mask
    counts = np.bincount(labels.ravel())
    counts[0] = 0
    return labels == counts.argmax()


def _interior_mask(shape):
    m = np.zeros(shape, dtype=bool)
    inner = tuple(slice(1, -1) for _ in shape)
    m[inner] = True
    return m


def _disc_stamp(radius):
    r = int(radius)
    yy, xx = np.mgrid[-r : r + 1, -r : r + 1]
    return yy * yy + xx * xx <= r * r


def _contour_level(mask, rng, spec):
    contour = trace_contour(mask)
    n = len(contour)
    if n < 5:
        return mask
    selected = np.flatnonzero(rng.random(n) < spec.p_deform)
    if len(selected) == 0:
        return mask
    out = mask.copy()
    interior = _interior_mask(mask.shape)
    for i in selected:
        outward = rng.random() < 0.5
        radius = max(1, int(math.ceil(abs(2.0 * rng.standard_normal()))))
        stamp = _disc_stamp(radius)
        for j in range(i - spec.neighborhood, i + spec.neighborhood + 1):
            p = contour[j % n]
            tangent = contour[(j + 1) % n] - contour[(j - 1) % n]
            normal = np.array([-tangent[1], tangent[0]], dtype=np.float64)
            nn = np.linalg.norm(normal)
            if nn == 0:
                continue
            normal /= nn
            # Point the normal at the background side.
            probe = np.rint(p + normal).astype(int)
            inb = (0 <= probe[0] < mask.shape[0]) and (0 <= probe[1] < mask.shape[1])
            if inb and mask[probe[0], probe[1]]:
                normal = -normal
            direction = normal if outward else -normal
            center = np.rint(p + direction).astype(int)
            _apply_stamp(out, center, stamp, add=outward, allowed=interior)
    out &= interior
    out = _largest_component(out, 2)
    if not out.any():
        return mask
    return out


def _apply_stamp(out, center, stamp, add, allowed):
    r = stamp.shape[0] // 2
    y0, x0 = center[0] - r, center[1] - r
    ys = slice(max(0, y0), min(out.shape[0], y0 + stamp.shape[0]))
    xs = slice(max(0, x0), min(out.shape[1], x0 + stamp.shape[1]))
    sy = slice(ys.start - y0, ys.stop - y0)
    sx = slice(xs.start - x0, xs.stop - x0)
    patch = stamp[sy, sx] & allowed[ys, xs]
    if add:
        out[ys, xs] |= patch
    else:
        out[ys, xs] &= ~patch


_N26 = [
    (dz, dy, dx)
    for dz in (-1, 0, 1)
    for dy in (-1, 0, 1)
    for dx in (-1, 0, 1)
    if (dz, dy, dx) != (0, 0, 0)
]


def _eden_level(mask, rng, spec):
    dims = np.asarray(mask.shape)
    # Background voxels 26-adjacent to the foreground, border excluded.
    dilated = ndimage.binary_dilation(mask, structure=np.ones((3, 3, 3), bool))
    shell = dilated & ~mask & _interior_mask(mask.shape)
    boundary_count = int(shell.sum())
    if boundary_count == 0:
        return mask
    events = spec.events_per_level
    if events is None:
        events = max(1, int(math.ceil(0.01 * boundary_count)))
    out = mask.copy()
    candidates = [tuple(p) for p in np.argwhere(shell)]
    cand_set = set(candidates)
    done = 0
    while done < events and candidates:
        k = int(rng.integers(len(candidates)))
        p = candidates[k]
        last = candidates.pop()
        if k < len(candidates):
            candidates[k] = last
        if p not in cand_set:
            continue
        cand_set.discard(p)
        out[p] = True
        done += 1
        for off in _N26:
            q = (p[0] + off[0], p[1] + off[1], p[2] + off[2])
            if (
                0 < q[0] < dims[0] - 1
                and 0 < q[1] < dims[1] - 1
                and 0 < q[2] < dims[2] - 1
                and not out[q]
                and q not in cand_set
            ):
                cand_set.add(q)
                candidates.append(q)
    return out


def apply_noise(grid, spec):
    """Apply ``spec.level`` rounds of the noise model to a grid.

    The canvas never changes, so perturbed and clean shapes share a
    coordinate frame; deformations are clipped to keep the one-cell
    background border intact, and only the largest component survives
    each round.
    """
    if spec.kind is NoiseKind.CONTOUR_2D and grid.ndim != 2:
        raise ParameterError("contour2d noise applies to 2D grids only")
    if spec.kind is NoiseKind.EDEN_3D and grid.ndim != 3:
        raise ParameterError("eden3d noise applies to 3D grids only")
    if not grid.data.any():
        raise DomainError("cannot perturb an empty shape")
    if spec.level == 0:
        return grid
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    mask = grid.data.copy()
    for _ in range(spec.level):
        if spec.kind is NoiseKind.CONTOUR_2D:
            mask = _contour_level(mask, rng, spec)
        else:
            mask = _eden_level(mask, rng, spec)
    return BinaryGrid(mask)


def rescale_grid(grid, factor):
    """Nearest-neighbor uniform rescale (used by the tau/scale sweep)."""
    if factor <= 0:
        raise ParameterError(f"scale factor must be positive, got {factor}")
    out_dims = tuple(max(3, int(round(d * factor))) for d in grid.dims)
    coords = np.indices(out_dims, dtype=np.float64)
    src = np.rint(coords / factor).astype(np.int64)
    for ax, d in enumerate(grid.dims):
        np.clip(src[ax], 0, d - 1, out=src[ax])
    from .grid import ensure_border

    return ensure_border(BinaryGrid(grid.data[tuple(src)]))


# ---------------------------------------------------------------------------
# Rotations


def _cos_sin(angle_deg):
    """cos/sin with exact values at multiples of 90 degrees."""
    a = angle_deg % 360
    if a == 0:
        return 1.0, 0.0
    if a == 90:
        return 0.0, 1.0
    if a == 180:
        return -1.0, 0.0
    if a == 270:
        return 0.0, -1.0
    rad = math.radians(angle_deg)
    return math.cos(rad), math.sin(rad)


def rotation_matrix(spec, ndim):
    """Rotation matrix acting on index-order vectors (y, x) / (z, y, x)."""
    if ndim == 2:
        c, s = _cos_sin(spec.angle2d)
        return np.array([[c, -s], [s, c]])
    ca, sa = _cos_sin(spec.azimuth)
    ce, se = _cos_sin(spec.elevation)
    # Azimuth about the z axis (rotates the x-y plane), elevation about y.
    r_az = np.array([[1, 0, 0], [0, ca, sa], [0, -sa, ca]], dtype=np.float64)
    r_el = np.array([[ce, 0, -se], [0, 1, 0], [se, 0, ce]], dtype=np.float64)
    return r_az @ r_el


def _output_dims(dims, rot):
    corners = np.array(np.meshgrid(*[(0.0, d - 1.0) for d in dims], indexing="ij"))
    corners = corners.reshape(len(dims), -1).T
    center = (np.asarray(dims, dtype=np.float64) - 1.0) / 2.0
    mapped = (rot @ (corners - center).T).T
    extent = mapped.max(axis=0) - mapped.min(axis=0)
    out = np.maximum(np.rint(extent + 1).astype(int) + 0, 3)
    # Half-ulp noise from trig must not change exact-permutation sizes.
    return tuple(int(v) for v in out)


def rotate_grid(grid, spec):
    """Nearest-neighbor rotation about the grid center, enlarged canvas."""
    rot = rotation_matrix(spec, grid.ndim)
    out_dims = _output_dims(grid.dims, rot)
    c_in = (np.asarray(grid.dims, dtype=np.float64) - 1.0) / 2.0
    c_out = (np.asarray(out_dims, dtype=np.float64) - 1.0) / 2.0
    coords = np.indices(out_dims, dtype=np.float64).reshape(grid.ndim, -1)
    src = rot.T @ (coords - c_out[:, None]) + c_in[:, None]
    src = np.rint(src).astype(np.int64)
    inb = np.ones(src.shape[1], dtype=bool)
    for ax, d in enumerate(grid.dims):
        inb &= (src[ax] >= 0) & (src[ax] < d)
    vals = np.zeros(src.shape[1], dtype=bool)
    vals[inb] = grid.data[tuple(src[:, inb])]
    return BinaryGrid(vals.reshape(out_dims))


def rotate_points(mat, spec, dims):
    """Rotate MAT points with the same center convention as rotate_grid.

    Radii are unchanged; coordinates are rounded to the lattice, and
    colliding points keep the larger radius.
    """
    ndim = len(dims)
    rot = rotation_matrix(spec, ndim)
    out_dims = _output_dims(dims, rot)
    c_in = (np.asarray(dims, dtype=np.float64) - 1.0) / 2.0
    c_out = (np.asarray(out_dims, dtype=np.float64) - 1.0) / 2.0
    if len(mat.points) == 0:
        return MedialAxisTransform(points=mat.points.copy(), radii=mat.radii.copy(), dims=out_dims)
    mapped = (rot @ (mat.points.T - c_in[:, None])) + c_out[:, None]
    pts = np.rint(mapped.T).astype(np.int64)
    pts = np.clip(pts, 0, np.asarray(out_dims) - 1)
    # Deduplicate: keep the larger radius at each landing cell.
    order = np.lexsort((-mat.radii,) + tuple(pts[:, ax] for ax in reversed(range(ndim))))
    pts, radii = pts[order], mat.radii[order]
    _, first = np.unique(pts, axis=0, return_index=True)
    keep = np.sort(first)
    return MedialAxisTransform(points=pts[keep], radii=radii[keep], dims=out_dims)
