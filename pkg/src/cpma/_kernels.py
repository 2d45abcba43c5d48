"""Numba kernels for the hot inner loops (maximal-ball tests, ball painting).

All ball-containment arithmetic is done on exact integer squared
distances: with a = |offset|, d = D(x), c = D(y) (all square roots of
integers), the containment condition a + d <= c is equivalent to
t = c^2 - a^2 - d^2 >= 0 and t^2 >= 4 a^2 d^2, which int64 evaluates
exactly at the grid sizes this package targets.
"""

import numpy as np
from numba import njit

_OFFSET_CACHE = {}


def ball_offsets(ndim, radius):
    """Nonzero lattice offsets with |o| <= radius, sorted by |o|^2.

    Returns (offsets int64 (K, ndim), norms2 int64 (K,), norms float64 (K,)).
    """
    radius = int(np.ceil(radius))
    key = (ndim, radius)
    cached = _OFFSET_CACHE.get(key)
    if cached is not None:
        return cached
    rng = np.arange(-radius, radius + 1, dtype=np.int64)
    grids = np.meshgrid(*([rng] * ndim), indexing="ij")
    offs = np.stack([g.ravel() for g in grids], axis=1)
    n2 = (offs * offs).sum(axis=1)
    keep = (n2 > 0) & (n2 <= radius * radius)
    offs, n2 = offs[keep], n2[keep]
    order = np.lexsort(tuple(offs[:, ax] for ax in reversed(range(ndim))) + (n2,))
    offs, n2 = offs[order], n2[order]
    result = (np.ascontiguousarray(offs), n2.copy(), np.sqrt(n2.astype(np.float64)))
    _OFFSET_CACHE[key] = result
    return result


@njit(cache=True)
def _mat_mask_2d(dist2, offs, n2s, nfs, maxd):
    H, W = dist2.shape
    out = np.zeros((H, W), np.bool_)
    K = n2s.shape[0]
    for y in range(H):
        for x in range(W):
            d2 = dist2[y, x]
            if d2 == 0:
                continue
            d = np.sqrt(d2)
            bound = maxd - d + 1e-6
            dominated = False
            for k in range(K):
                if nfs[k] > bound:
                    break
                yy = y + offs[k, 0]
                if yy < 0 or yy >= H:
                    continue
                xx = x + offs[k, 1]
                if xx < 0 or xx >= W:
                    continue
                t = dist2[yy, xx] - n2s[k] - d2
                if t >= 0 and t * t >= 4 * n2s[k] * d2:
                    dominated = True
                    break
            out[y, x] = not dominated
    return out


@njit(cache=True)
def _mat_mask_3d(dist2, offs, n2s, nfs, maxd):
    D, H, W = dist2.shape
    out = np.zeros((D, H, W), np.bool_)
    K = n2s.shape[0]
    for z in range(D):
        for y in range(H):
            for x in range(W):
                d2 = dist2[z, y, x]
                if d2 == 0:
                    continue
                d = np.sqrt(d2)
                bound = maxd - d + 1e-6
                dominated = False
                for k in range(K):
                    if nfs[k] > bound:
                        break
                    zz = z + offs[k, 0]
                    if zz < 0 or zz >= D:
                        continue
                    yy = y + offs[k, 1]
                    if yy < 0 or yy >= H:
                        continue
                    xx = x + offs[k, 2]
                    if xx < 0 or xx >= W:
                        continue
                    t = dist2[zz, yy, xx] - n2s[k] - d2
                    if t >= 0 and t * t >= 4 * n2s[k] * d2:
                        dominated = True
                        break
                out[z, y, x] = not dominated
    return out


def maximal_ball_mask(dist2):
    """Mask of foreground cells whose ball is not contained in another's.

    x is dropped iff some other cell y satisfies |x - y| + D(x) <= D(y);
    only offsets up to max(D) - D(x) can dominate, which bounds the scan.
    """
    maxd = float(np.sqrt(dist2.max()))
    offs, n2s, nfs = ball_offsets(dist2.ndim, maxd)
    if dist2.ndim == 2:
        return _mat_mask_2d(dist2, offs, n2s, nfs, maxd)
    return _mat_mask_3d(dist2, offs, n2s, nfs, maxd)


# Painting uses a strict interior test |u - x|^2 < r^2 - eps so that a
# ball of radius D(x) never reaches the background cell realizing D(x);
# the center cell is always painted.
_PAINT_EPS = 1e-6


@njit(cache=True)
def _paint_balls_2d(mask, pts, r2s):
    H, W = mask.shape
    for p in range(pts.shape[0]):
        y0, x0 = pts[p, 0], pts[p, 1]
        mask[y0, x0] = True
        r2 = r2s[p] - _PAINT_EPS
        rad = int(np.sqrt(r2s[p])) + 1
        for y in range(max(0, y0 - rad), min(H, y0 + rad + 1)):
            dy2 = (y - y0) * (y - y0)
            for x in range(max(0, x0 - rad), min(W, x0 + rad + 1)):
                if dy2 + (x - x0) * (x - x0) < r2:
                    mask[y, x] = True


@njit(cache=True)
def _paint_balls_3d(mask, pts, r2s):
    D, H, W = mask.shape
    for p in range(pts.shape[0]):
        z0, y0, x0 = pts[p, 0], pts[p, 1], pts[p, 2]
        mask[z0, y0, x0] = True
        r2 = r2s[p] - _PAINT_EPS
        rad = int(np.sqrt(r2s[p])) + 1
        for z in range(max(0, z0 - rad), min(D, z0 + rad + 1)):
            dz2 = (z - z0) * (z - z0)
            for y in range(max(0, y0 - rad), min(H, y0 + rad + 1)):
                d2 = dz2 + (y - y0) * (y - y0)
                for x in range(max(0, x0 - rad), min(W, x0 + rad + 1)):
                    if d2 + (x - x0) * (x - x0) < r2:
                        mask[z, y, x] = True


def paint_balls(dims, points, radii):
    """Union of digital balls {u : |u - x| < r} (plus centers) as a mask."""
    mask = np.zeros(dims, dtype=bool)
    pts = np.ascontiguousarray(points, dtype=np.int64)
    r2s = np.ascontiguousarray(np.asarray(radii, dtype=np.float64) ** 2)
    if pts.shape[0] == 0:
        return mask
    if len(dims) == 2:
        _paint_balls_2d(mask, pts, r2s)
    else:
        _paint_balls_3d(mask, pts, r2s)
    return mask


@njit(cache=True)
def _scaled_containment_filter(pts, dist, scale):
    """SFEMA-style filter: drop x if some y has |x-y| + s*D(x) <= s*D(y)."""
    K = pts.shape[0]
    nd = pts.shape[1]
    keep = np.ones(K, np.bool_)
    for i in range(K):
        di = scale * dist[i]
        for j in range(K):
            if i == j:
                continue
            dj = scale * dist[j]
            if dj <= di:
                continue
            acc = 0.0
            for a in range(nd):
                diff = pts[i, a] - pts[j, a]
                acc += diff * diff
            if np.sqrt(acc) + di <= dj + 1e-12:
                keep[i] = False
                break
    return keep
