"""Cosine-pruned medial axis extraction for 2D images and 3D voxel grids.

The public surface re-exports the main types and operations; see the
README for a guided tour and the demos/ scripts for worked examples.
"""

from .core import ConnectResult, CpmaConfig, LatticeGraph, build_lattice, connect_cpma, extract_cpma, score_function
from .distfield import DistanceField, edt
from .errors import (
    CpmaError,
    DomainError,
    FormatError,
    MethodNotImplementedError,
    ParameterError,
    VoxelizationError,
)
from .grid import BinaryGrid, foreground_points, load_grid, save_grid
from .metrics import dubuisson_jain, hausdorff, jaccard
from .perturb import NoiseKind, NoiseSpec, RotationSpec, apply_noise, rescale_grid, rotate_grid, rotate_points
from .ply import TriangleMesh, parse_ply, voxelize
from .skeleton import MedialAxisTransform, Method, PrunerSpec, extract_mat, prune, reconstruct, thinning
from .transform import SpectralField, dct_forward, idct_full, lowpass_reconstruct

__all__ = [
    "BinaryGrid",
    "ConnectResult",
    "CpmaConfig",
    "CpmaError",
    "DistanceField",
    "DomainError",
    "FormatError",
    "LatticeGraph",
    "MedialAxisTransform",
    "Method",
    "MethodNotImplementedError",
    "NoiseKind",
    "NoiseSpec",
    "ParameterError",
    "PrunerSpec",
    "RotationSpec",
    "SpectralField",
    "TriangleMesh",
    "VoxelizationError",
    "apply_noise",
    "build_lattice",
    "connect_cpma",
    "dct_forward",
    "dubuisson_jain",
    "edt",
    "extract_cpma",
    "extract_mat",
    "foreground_points",
    "hausdorff",
    "idct_full",
    "jaccard",
    "load_grid",
    "lowpass_reconstruct",
    "parse_ply",
    "prune",
    "reconstruct",
    "rescale_grid",
    "rotate_grid",
    "rotate_points",
    "save_grid",
    "score_function",
    "thinning",
    "voxelize",
]

__version__ = "0.1.0"
