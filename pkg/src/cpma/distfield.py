"""Exact Euclidean distance transform and nearest-background features.

The heavy lifting is delegated to scipy's exact EDT; squared distances
are recomputed from the feature (nearest-background) coordinates so they
are available as exact integers, which the maximal-ball test relies on.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DomainError


@dataclass(frozen=True)
class DistanceField:
    """Per-cell distance to the nearest background cell.

    dist     -- float64 Euclidean distance, 0 on background
    dist2    -- the same distances squared, exact int64
    feature  -- (ndim, *dims) coordinates of a nearest background cell
    """

    dist: np.ndarray
    dist2: np.ndarray
    feature: np.ndarray

    @property
    def dims(self):
        return self.dist.shape


def edt(grid):
    """Exact Euclidean distance transform of a binary grid."""
    fg = grid.data
    if fg.all():
        raise DomainError("distance transform needs at least one background cell")
    return edt_of_mask(fg)


def edt_of_mask(fg):
    """EDT of a raw boolean mask (internal helper, no validation)."""
    feature = ndimage.distance_transform_edt(fg, return_indices=True, return_distances=False)
    coords = np.indices(fg.shape, dtype=np.int64)
    dist2 = np.zeros(fg.shape, dtype=np.int64)
    for ax in range(fg.ndim):
        d = coords[ax] - feature[ax]
        dist2 += d * d
    return DistanceField(dist=np.sqrt(dist2.astype(np.float64)), dist2=dist2, feature=feature)
