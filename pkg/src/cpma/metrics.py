"""Similarity metrics between skeletons and shapes.

Point-set distances (Hausdorff and its outlier-robust averaged variant)
are computed by rasterizing one set and reading the exact EDT of its
indicator at the other set's coordinates, which is linear in the number
of cells instead of quadratic in points.
"""

import numpy as np
from scipy import ndimage

from .errors import DomainError, ParameterError
from .grid import BinaryGrid


def _as_points(obj):
    pts = getattr(obj, "points", obj)
    pts = np.asarray(pts, dtype=np.int64)
    if pts.ndim != 2:
        raise ParameterError("expected an (K, ndim) point array")
    return pts


def _nearest_distances(X, Y):
    """d(x, Y) for every x in X, exact Euclidean."""
    nd = X.shape[1]
    lo = np.minimum(X.min(axis=0), Y.min(axis=0))
    hi = np.maximum(X.max(axis=0), Y.max(axis=0))
    dims = tuple((hi - lo + 1).tolist())
    occupied = np.ones(dims, dtype=bool)
    occupied[tuple((Y - lo).T)] = False  # zeros mark Y cells
    dist = ndimage.distance_transform_edt(occupied)
    return dist[tuple((X - lo).T)]


def _check_pair(X, Y):
    if len(X) == 0 or len(Y) == 0:
        raise DomainError("point-set distances need nonempty sets")
    if X.shape[1] != Y.shape[1]:
        raise ParameterError("point sets live in different dimensions")


def hausdorff(X, Y):
    """max over both directions of the largest nearest-point distance."""
    X, Y = _as_points(X), _as_points(Y)
    _check_pair(X, Y)
    return float(max(_nearest_distances(X, Y).max(), _nearest_distances(Y, X).max()))


def dubuisson_jain(X, Y):
    """max over both directions of the mean nearest-point distance."""
    X, Y = _as_points(X), _as_points(Y)
    _check_pair(X, Y)
    return float(max(_nearest_distances(X, Y).mean(), _nearest_distances(Y, X).mean()))


def jaccard(a, b):
    """Intersection over union of two equal-dims grids; 1 if both empty."""
    da = a.data if isinstance(a, BinaryGrid) else np.asarray(a, dtype=bool)
    db = b.data if isinstance(b, BinaryGrid) else np.asarray(b, dtype=bool)
    if da.shape != db.shape:
        raise ParameterError(f"grid dims differ: {da.shape} vs {db.shape}")
    union = int((da | db).sum())
    if union == 0:
        return 1.0
    return int((da & db).sum()) / union
