import os

import numpy as np
import pytest

from cpma.grid import load_grid

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")

# One line per acceptance criterion, printed in the terminal summary so
# the verdicts are visible even though pytest captures stdout.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

# The committed synthetic shape suite.  2D images are 128x128, 3D
# volumes are 48^3; see tools/make_fixtures.py.
SUITE_2D = ["disc", "rectangle", "l_shape", "rectangle_with_bump", "star", "quadruped", "blob"]
SUITE_3D = ["box", "l_prism", "cylinder"]


def fixture_path(name):
    for ext in (".pbm", ".vox", ".ply"):
        p = os.path.join(FIXTURE_DIR, name + ext)
        if os.path.exists(p):
            return p
    raise FileNotFoundError(name)


def load_fixture(name):
    return load_grid(fixture_path(name))


@pytest.fixture(scope="session")
def suite_2d():
    return {name: load_fixture(name) for name in SUITE_2D}


@pytest.fixture(scope="session")
def suite_3d():
    return {name: load_fixture(name) for name in SUITE_3D}


def random_grid(rng, dims, p=0.4):
    """Random occupancy grid with a guaranteed background border."""
    data = rng.random(dims) < p
    for ax in range(data.ndim):
        sl = [slice(None)] * data.ndim
        sl[ax] = 0
        data[tuple(sl)] = False
        sl[ax] = -1
        data[tuple(sl)] = False
    if not data.any():
        data[tuple(d // 2 for d in dims)] = True
    from cpma.grid import BinaryGrid

    return BinaryGrid(data)


def brute_force_edt2(fg):
    """Squared distance to the nearest background cell, O(n^2) reference."""
    bg = np.argwhere(~fg)
    out = np.zeros(fg.shape, dtype=np.int64)
    for p in np.argwhere(fg):
        d = ((bg - p) ** 2).sum(axis=1)
        out[tuple(p)] = d.min()
    return out


def brute_force_mat(fg, dist2=None):
    """Reference maximal-ball medial axis via pairwise domination tests."""
    if dist2 is None:
        dist2 = brute_force_edt2(fg)
    pts = np.argwhere(fg)
    d = np.sqrt(dist2[tuple(pts.T)].astype(np.float64))
    keep = np.zeros(fg.shape, dtype=bool)
    for i, p in enumerate(pts):
        dominated = False
        for j, q in enumerate(pts):
            if i == j:
                continue
            if np.linalg.norm((p - q).astype(float)) + d[i] <= d[j] + 1e-12:
                dominated = True
                break
        if not dominated:
            keep[tuple(p)] = True
    return keep
