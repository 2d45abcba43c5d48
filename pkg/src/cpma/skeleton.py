"""Discrete medial axis transform and baseline pruning methods.

``extract_mat`` implements the maximal-ball definition of the medial
axis on the lattice: a foreground point x (with radius D(x) from the
exact EDT) is kept unless some other point y satisfies
|x - y| + D(x) <= D(y), in which case x's ball lies inside y's.

The baseline pruners operate on the MAT point set:

* GIMA   -- keep x if two nearby feature (nearest-boundary) points are
            at least gamma apart;
* BEMA   -- keep x if the angle spanned by feature points of x's
            neighborhood, seen from x, is at least theta degrees;
* SAT    -- scale all ball radii by s, reconstruct, and re-extract the
            medial axis of the inflated shape;
* SFEMA  -- maximal-ball test among balls scaled by s;
* thinning -- iterative topological thinning (Zhang-Suen in 2D, simple
            -point boundary peeling in 3D); unlike the others its output
            is a homotopic erosion of the shape, not a MAT subset.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import ndimage

from . import _kernels
from .distfield import edt, edt_of_mask
from .errors import DomainError, MethodNotImplementedError, ParameterError
from .grid import BinaryGrid


@dataclass(frozen=True)
class MedialAxisTransform:
    """Set of (lattice point, maximal-ball radius) pairs."""

    points: np.ndarray  # (K, ndim) int64, sorted row-major, no duplicates
    radii: np.ndarray  # (K,) float64
    dims: tuple

    @classmethod
    def from_mask(cls, mask, dist):
        pts = np.argwhere(mask).astype(np.int64)
        radii = dist[tuple(pts.T)].astype(np.float64)
        return cls(points=pts, radii=radii, dims=mask.shape)

    def as_mask(self):
        mask = np.zeros(self.dims, dtype=bool)
        if len(self.points):
            mask[tuple(self.points.T)] = True
        return mask

    def __len__(self):
        return len(self.points)

    def point_set(self):
        return {tuple(p) for p in self.points}


class Method(str, Enum):
    MAT = "mat"
    THINNING = "thinning"
    GIMA = "gima"
    BEMA = "bema"
    SAT = "sat"
    SFEMA = "sfema"
    POISSON = "poisson"  # declared for benchmark joins, not implemented
    TEASAR = "teasar"  # declared for benchmark joins, not implemented


@dataclass(frozen=True)
class PrunerSpec:
    """Baseline method selector plus its parameter.

    gamma: GIMA feature-separation threshold (pixels), >= 0
    theta: BEMA separation angle (degrees), in [0, 180]
    scale: SAT/SFEMA ball scale factor, >= 1
    """

    method: Method = Method.MAT
    gamma: float = 0.0
    theta: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.gamma < 0:
            raise ParameterError(f"gamma must be >= 0, got {self.gamma}")
        if not 0 <= self.theta <= 180:
            raise ParameterError(f"theta must be in [0, 180], got {self.theta}")
        if self.scale < 1:
            raise ParameterError(f"scale must be >= 1, got {self.scale}")

    def label(self):
        m = self.method.value
        if self.method is Method.GIMA:
            return f"{m}(gamma={self.gamma:g})"
        if self.method is Method.BEMA:
            return f"{m}(theta={self.theta:g})"
        if self.method in (Method.SAT, Method.SFEMA):
            return f"{m}(scale={self.scale:g})"
        return m


def extract_mat(grid, dist_field=None):
    """Un-pruned discrete medial axis transform of a grid."""
    if not grid.data.any():
        raise DomainError("cannot extract a medial axis from an empty shape")
    df = dist_field if dist_field is not None else edt(grid)
    mask = _kernels.maximal_ball_mask(df.dist2)
    return MedialAxisTransform.from_mask(mask, df.dist)


def mat_indicator(mask):
    """MAT of a raw mask as a 0/1 field of the same shape.

    The domain is treated as surrounded by background: the mask is
    temporarily padded so the EDT is defined even when the foreground
    touches (or fills) the canvas.  Used by the score function, where
    low-frequency reconstructions may cover the whole canvas.
    """
    if not mask.any():
        return np.zeros(mask.shape, dtype=np.float64)
    padded = np.pad(mask, 1, mode="constant", constant_values=False)
    df = edt_of_mask(padded)
    keep = _kernels.maximal_ball_mask(df.dist2)
    inner = tuple(slice(1, -1) for _ in range(mask.ndim))
    return keep[inner].astype(np.float64)


def reconstruct(mat, dims):
    """Union of the digital balls of a MAT; inverts ``extract_mat``."""
    pts = np.asarray(mat.points, dtype=np.int64).reshape(-1, len(dims))
    if len(pts) and ((pts < 0).any() or (pts >= np.asarray(dims)).any()):
        raise ParameterError("MAT points fall outside the target dims")
    return BinaryGrid(_kernels.paint_balls(tuple(dims), pts, mat.radii))


def neighbor_offsets(ndim):
    """8-connectivity (2D) / 26-connectivity (3D) neighbor offsets."""
    offs, n2, _ = _kernels.ball_offsets(ndim, 2)
    return offs[n2 <= ndim]


def _feature_neighbor_stats(df, fg, mask):
    """Per masked cell: feature points of the cell and its fg neighbors.

    Returns (own (K, nd), neighbor list of (K, nd) arrays, valid (K,) per
    neighbor offset) for vectorized GIMA/BEMA criteria.
    """
    nd = fg.ndim
    pts = np.argwhere(mask).astype(np.int64)
    feat = np.stack([df.feature[ax] for ax in range(nd)], axis=-1)  # (*dims, nd)
    own = feat[tuple(pts.T)]
    per_neighbor = []
    dims = np.asarray(fg.shape)
    for off in neighbor_offsets(nd):
        q = pts + off
        ok = np.all((q >= 0) & (q < dims), axis=1)
        okq = q[ok]
        valid = ok.copy()
        if len(okq):
            valid[ok] = fg[tuple(okq.T)]
        nfeat = np.zeros_like(own)
        sel = valid
        if sel.any():
            nfeat[sel] = feat[tuple((pts[sel] + off).T)]
        per_neighbor.append((sel, nfeat))
    return pts, own, per_neighbor


def _gima_keep(grid, df, mat):
    mask = mat.as_mask()
    pts, own, per_neighbor = _feature_neighbor_stats(df, grid.data, mask)
    best = np.zeros(len(pts), dtype=np.float64)
    for sel, nfeat in per_neighbor:
        d = np.linalg.norm((own - nfeat).astype(np.float64), axis=1)
        best = np.where(sel, np.maximum(best, d), best)
    return pts, best


def _bema_keep(grid, df, mat):
    mask = mat.as_mask()
    pts, own, per_neighbor = _feature_neighbor_stats(df, grid.data, mask)
    u = (own - pts).astype(np.float64)
    un = np.linalg.norm(u, axis=1)
    best = np.zeros(len(pts), dtype=np.float64)
    for sel, nfeat in per_neighbor:
        v = (nfeat - pts).astype(np.float64)
        vn = np.linalg.norm(v, axis=1)
        denom = np.where((un > 0) & (vn > 0), un * vn, 1.0)
        cosang = np.clip((u * v).sum(axis=1) / denom, -1.0, 1.0)
        ang = np.degrees(np.arccos(cosang))
        ang = np.where((un > 0) & (vn > 0), ang, 0.0)
        best = np.where(sel, np.maximum(best, ang), best)
    return pts, best


def _filter_mat(mat, pts, keep):
    kept = pts[keep]
    radii = mat.radii[keep]
    return MedialAxisTransform(points=kept, radii=radii, dims=mat.dims)


def _sat(grid, df, mat, scale):
    if scale == 1.0:
        return mat
    inflated = _kernels.paint_balls(mat.dims, mat.points, mat.radii * scale)
    # The inflated shape can leak outside the original; keep its border
    # background so the EDT stays defined, then re-extract.
    border = np.ones(mat.dims, dtype=bool)
    inner = tuple(slice(1, -1) for _ in range(len(mat.dims)))
    border[inner] = False
    inflated &= ~border
    sat_mat = extract_mat(BinaryGrid(inflated))
    # Restrict to the original MAT point set so radii and the subset
    # invariant stay tied to the original shape.
    mat_mask = mat.as_mask()
    keep = mat_mask[tuple(sat_mat.points.T)] if len(sat_mat.points) else np.zeros(0, bool)
    pts = sat_mat.points[keep]
    radii = df.dist[tuple(pts.T)] if len(pts) else np.zeros(0)
    return MedialAxisTransform(points=pts, radii=radii, dims=mat.dims)


def _sfema(mat, scale):
    if len(mat.points) == 0:
        return mat
    keep = _kernels._scaled_containment_filter(
        np.ascontiguousarray(mat.points, dtype=np.int64),
        np.ascontiguousarray(mat.radii, dtype=np.float64),
        float(scale),
    )
    return _filter_mat(mat, mat.points, keep)


def prune(grid, spec):
    """Apply one of the baseline pruning methods to a grid's MAT."""
    if spec.method in (Method.POISSON, Method.TEASAR):
        raise MethodNotImplementedError(f"method not implemented: {spec.method.value}")
    if spec.method is Method.THINNING:
        return thinning(grid)
    df = edt(grid)
    mat = extract_mat(grid, df)
    if spec.method is Method.MAT:
        return mat
    if spec.method is Method.GIMA:
        pts, best = _gima_keep(grid, df, mat)
        return _filter_mat(mat, pts, best >= spec.gamma)
    if spec.method is Method.BEMA:
        pts, best = _bema_keep(grid, df, mat)
        return _filter_mat(mat, pts, best >= spec.theta)
    if spec.method is Method.SAT:
        return _sat(grid, df, mat, spec.scale)
    if spec.method is Method.SFEMA:
        return _sfema(mat, spec.scale)
    raise ParameterError(f"unknown method {spec.method!r}")


# ---------------------------------------------------------------------------
# Topological thinning


def _zhang_suen(mask):
    """Zhang-Suen thinning of a 2D mask (returns a new mask)."""
    # Padding keeps np.roll wraparound harmless (edges are background).
    img = np.pad(mask, 1, mode="constant", constant_values=False).astype(np.uint8)

    def neighbors(a):
        # P2..P9 clockwise starting north, as shifted copies.
        p2 = np.roll(a, 1, axis=0)
        p3 = np.roll(np.roll(a, 1, axis=0), -1, axis=1)
        p4 = np.roll(a, -1, axis=1)
        p5 = np.roll(np.roll(a, -1, axis=0), -1, axis=1)
        p6 = np.roll(a, -1, axis=0)
        p7 = np.roll(np.roll(a, -1, axis=0), 1, axis=1)
        p8 = np.roll(a, 1, axis=1)
        p9 = np.roll(np.roll(a, 1, axis=0), 1, axis=1)
        return [p2, p3, p4, p5, p6, p7, p8, p9]

    structure = np.ones((3, 3), dtype=bool)
    while True:
        snapshot = img.copy()
        for phase in (0, 1):
            ps = neighbors(img)
            b = sum(ps)
            ring = ps + [ps[0]]
            a = sum(((ring[k] == 0) & (ring[k + 1] == 1)).astype(np.uint8) for k in range(8))
            p2, p3, p4, p5, p6, p7, p8, p9 = ps
            if phase == 0:
                c1 = (p2 * p4 * p6) == 0
                c2 = (p4 * p6 * p8) == 0
            else:
                c1 = (p2 * p4 * p8) == 0
                c2 = (p2 * p6 * p8) == 0
            remove = (img == 1) & (b >= 2) & (b <= 6) & (a == 1) & c1 & c2
            if remove.any():
                # The parallel update can annihilate a whole component
                # (e.g. an isolated 2x2 block); keep one representative
                # pixel of any component that would vanish.
                before, ncomp = ndimage.label(img, structure=structure)
                img[remove] = 0
                for c in range(1, ncomp + 1):
                    comp = before == c
                    if not img[comp].any():
                        idx = np.flatnonzero(comp.ravel() & remove.ravel())[0]
                        img.ravel()[idx] = 1
        if np.array_equal(img, snapshot):
            break
    _thin_2x2_cleanup(img)
    return img[1:-1, 1:-1].astype(bool)


def _is_simple_2d(patch):
    """Crossing-number test: removal of the center keeps local topology."""
    ring_idx = [(0, 1), (0, 2), (1, 2), (2, 2), (2, 1), (2, 0), (1, 0), (0, 0)]
    ring = [int(patch[i, j]) for i, j in ring_idx]
    transitions = sum(ring[k] == 0 and ring[(k + 1) % 8] == 1 for k in range(8))
    return transitions == 1


def _thin_2x2_cleanup(img):
    # Zhang-Suen can leave full 2x2 blocks on staircases; erode one simple
    # corner per block until none remain.
    H, W = img.shape
    changed = True
    while changed:
        changed = False
        blocks = (img[:-1, :-1] & img[1:, :-1] & img[:-1, 1:] & img[1:, 1:]).astype(bool)
        for y, x in np.argwhere(blocks):
            for dy, dx in ((0, 0), (0, 1), (1, 0), (1, 1)):
                py, px = y + dy, x + dx
                if 1 <= py < H - 1 and 1 <= px < W - 1:
                    patch = img[py - 1 : py + 2, px - 1 : px + 2]
                    if _is_simple_2d(patch):
                        img[py, px] = 0
                        changed = True
                        break
            if changed:
                break


_N26 = [
    (dz, dy, dx)
    for dz in (-1, 0, 1)
    for dy in (-1, 0, 1)
    for dx in (-1, 0, 1)
    if (dz, dy, dx) != (0, 0, 0)
]
_N6 = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
_N18 = [o for o in _N26 if abs(o[0]) + abs(o[1]) + abs(o[2]) <= 2]


def _is_simple_3d(patch):
    """Simple-point test on a 3x3x3 patch (center assumed foreground).

    Condition A: the foreground 26-neighbors form one 26-connected
    component.  Condition B: the background 6-neighbors of the center are
    all in one 6-connected background component of the 18-neighborhood.
    """
    fg = {o for o in _N26 if patch[o[0] + 1, o[1] + 1, o[2] + 1]}
    if not fg:
        return False
    # A: one 26-component among foreground neighbors.
    seen = set()
    stack = [next(iter(fg))]
    while stack:
        p = stack.pop()
        if p in seen:
            continue
        seen.add(p)
        for q in fg:
            if q not in seen and max(abs(p[0] - q[0]), abs(p[1] - q[1]), abs(p[2] - q[2])) <= 1:
                stack.append(q)
    if seen != fg:
        return False
    # B: background 6-neighbors of the center all reachable from each
    # other through background cells of the 18-neighborhood, 6-adjacency.
    bg6 = [o for o in _N6 if not patch[o[0] + 1, o[1] + 1, o[2] + 1]]
    if not bg6:
        return False
    bg18 = {o for o in _N18 if not patch[o[0] + 1, o[1] + 1, o[2] + 1]}
    seen = set()
    stack = [bg6[0]]
    while stack:
        p = stack.pop()
        if p in seen:
            continue
        seen.add(p)
        for q in bg18:
            if q not in seen and abs(p[0] - q[0]) + abs(p[1] - q[1]) + abs(p[2] - q[2]) == 1:
                stack.append(q)
    return all(o in seen for o in bg6)


def _thin_3d(mask):
    """Directional boundary peeling with simple-point preservation."""
    img = np.pad(mask, 1, mode="constant", constant_values=False)
    while True:
        changed = False
        for direction in _N6:
            shifted = np.roll(img, direction, axis=(0, 1, 2))
            border = img & ~shifted
            for z, y, x in np.argwhere(border):
                if not img[z, y, x]:
                    continue
                patch = img[z - 1 : z + 2, y - 1 : y + 2, x - 1 : x + 2]
                nb = int(patch.sum()) - 1
                if nb <= 1:  # endpoint, preserved
                    continue
                if _is_simple_3d(patch):
                    img[z, y, x] = False
                    changed = True
        if not changed:
            break
    return img[1:-1, 1:-1, 1:-1]


def thinning(grid):
    """Topological thinning baseline; radii taken from the original EDT."""
    if not grid.data.any():
        raise DomainError("cannot thin an empty shape")
    df = edt(grid)
    if grid.ndim == 2:
        mask = _zhang_suen(grid.data)
    else:
        mask = _thin_3d(grid.data)
    return MedialAxisTransform.from_mask(mask, df.dist)
