import numpy as np
import pytest
from scipy import ndimage

from cpma.distfield import edt
from cpma.errors import DomainError, MethodNotImplementedError, ParameterError
from cpma.grid import BinaryGrid
from cpma.metrics import jaccard
from cpma.shapes import disc, l_shape, rectangle
from cpma.skeleton import (
    MedialAxisTransform,
    Method,
    PrunerSpec,
    extract_mat,
    neighbor_offsets,
    prune,
    reconstruct,
    thinning,
)

from conftest import brute_force_mat, random_grid


def rect_grid(h, w, pad=2):
    return BinaryGrid(np.pad(np.ones((h, w), dtype=bool), pad))


@pytest.mark.parametrize("dims,n", [((10, 12), 25), ((7, 8, 9), 8)])
def test_mat_matches_brute_force(dims, n):
    rng = np.random.default_rng(17)
    for _ in range(n):
        g = random_grid(rng, dims, p=rng.uniform(0.3, 0.8))
        mat = extract_mat(g)
        assert np.array_equal(mat.as_mask(), brute_force_mat(g.data))


def test_mat_of_narrow_bar():
    # A 1-cell-wide bar is its own medial axis.
    g = rect_grid(1, 7)
    mat = extract_mat(g)
    assert np.array_equal(mat.as_mask(), g.data)
    assert np.allclose(mat.radii, 1.0)


def test_mat_of_rectangle_matches_oracle():
    g = rect_grid(3, 7)
    assert np.array_equal(extract_mat(g).as_mask(), brute_force_mat(g.data))


def test_mat_radii_come_from_edt():
    g = disc(32)
    mat = extract_mat(g)
    df = edt(g)
    assert np.allclose(mat.radii, df.dist[tuple(mat.points.T)])
    assert g.data[tuple(mat.points.T)].all()


@pytest.mark.parametrize("g", [disc(32), rectangle(48, height=10, width=30), l_shape(48, arm=30, thickness=9)])
def test_reconstruction_inverts_extraction(g):
    rec = reconstruct(extract_mat(g), g.dims)
    assert jaccard(rec, g) == 1.0


def test_reconstruction_on_random_grids():
    rng = np.random.default_rng(23)
    for _ in range(20):
        g = random_grid(rng, (14, 15), p=0.55)
        assert reconstruct(extract_mat(g), g.dims) == g


def test_reconstruct_zero_radius_is_single_cell():
    mat = MedialAxisTransform(
        points=np.array([[5, 5]], dtype=np.int64), radii=np.array([0.0]), dims=(11, 11)
    )
    rec = reconstruct(mat, (11, 11))
    assert rec.count() == 1 and rec.data[5, 5]


def test_reconstruct_strict_ball():
    # radius 2: cells at distance < 2 (the distance-2 ring is excluded).
    mat = MedialAxisTransform(
        points=np.array([[4, 4]], dtype=np.int64), radii=np.array([2.0]), dims=(9, 9)
    )
    rec = reconstruct(mat, (9, 9)).data
    yy, xx = np.mgrid[0:9, 0:9]
    assert np.array_equal(rec, (yy - 4) ** 2 + (xx - 4) ** 2 < 4)


def test_reconstruct_rejects_out_of_range_points():
    mat = MedialAxisTransform(
        points=np.array([[5, 12]], dtype=np.int64), radii=np.array([1.0]), dims=(8, 8)
    )
    with pytest.raises(ParameterError):
        reconstruct(mat, (8, 8))


def test_empty_shape_rejected():
    with pytest.raises(DomainError):
        extract_mat(BinaryGrid(np.zeros((5, 5), dtype=bool)))
    with pytest.raises(DomainError):
        thinning(BinaryGrid(np.zeros((5, 5), dtype=bool)))


def test_neighbor_offsets():
    offs2 = {tuple(o) for o in neighbor_offsets(2)}
    assert len(offs2) == 8 and (1, 1) in offs2 and (0, 0) not in offs2
    offs3 = neighbor_offsets(3)
    assert len(offs3) == 26
    assert (np.abs(offs3) <= 1).all()


# ---------------------------------------------------------------------------
# Baseline pruners


def _pruned_sets(g, specs):
    return [prune(g, s).point_set() for s in specs]


def test_gima_monotone_and_subset():
    g = l_shape(48, arm=30, thickness=9)
    mat = extract_mat(g).point_set()
    s0, s2, s5 = _pruned_sets(
        g,
        [
            PrunerSpec(method=Method.GIMA, gamma=0.0),
            PrunerSpec(method=Method.GIMA, gamma=2.0),
            PrunerSpec(method=Method.GIMA, gamma=6.0),
        ],
    )
    assert s0 == mat  # gamma 0 keeps everything
    assert s5 <= s2 <= s0
    assert len(s5) < len(s0)


def test_bema_monotone_and_subset():
    g = l_shape(48, arm=30, thickness=9)
    mat = extract_mat(g).point_set()
    s0, s90, s150 = _pruned_sets(
        g,
        [
            PrunerSpec(method=Method.BEMA, theta=0.0),
            PrunerSpec(method=Method.BEMA, theta=90.0),
            PrunerSpec(method=Method.BEMA, theta=150.0),
        ],
    )
    assert s0 == mat
    assert s150 <= s90 <= s0
    assert len(s150) < len(s0)


def test_sat_identity_at_scale_one_and_subset():
    g = disc(32)
    mat = extract_mat(g).point_set()
    assert prune(g, PrunerSpec(method=Method.SAT, scale=1.0)).point_set() == mat
    s = prune(g, PrunerSpec(method=Method.SAT, scale=1.2)).point_set()
    assert s <= mat


def test_sfema_identity_at_scale_one_and_monotone():
    g = l_shape(48, arm=30, thickness=9)
    mat = extract_mat(g).point_set()
    assert prune(g, PrunerSpec(method=Method.SFEMA, scale=1.0)).point_set() == mat
    s12 = prune(g, PrunerSpec(method=Method.SFEMA, scale=1.2)).point_set()
    s15 = prune(g, PrunerSpec(method=Method.SFEMA, scale=1.5)).point_set()
    assert s15 <= s12 <= mat
    assert len(s15) < len(mat)


def test_pruner_spec_validation():
    with pytest.raises(ParameterError):
        PrunerSpec(method=Method.GIMA, gamma=-1.0)
    with pytest.raises(ParameterError):
        PrunerSpec(method=Method.BEMA, theta=181.0)
    with pytest.raises(ParameterError):
        PrunerSpec(method=Method.SAT, scale=0.5)
    assert PrunerSpec(method=Method.GIMA, gamma=2.0).label() == "gima(gamma=2)"


def test_unimplemented_methods_raise():
    g = disc(16)
    for m in (Method.POISSON, Method.TEASAR):
        with pytest.raises(MethodNotImplementedError):
            prune(g, PrunerSpec(method=m))


# ---------------------------------------------------------------------------
# Thinning


def _component_count(mask, ndim):
    _, n = ndimage.label(mask, structure=np.ones((3,) * ndim, dtype=bool))
    return n


@pytest.mark.parametrize("g", [disc(48), rectangle(64, height=16, width=44), l_shape(64, arm=44, thickness=13)])
def test_thinning_preserves_components_and_is_thin(g):
    sk = thinning(g).as_mask()
    assert sk.any()
    assert (sk <= g.data).all()
    assert _component_count(sk, 2) == _component_count(g.data, 2)
    # No solid 2x2 block survives.
    assert not (sk[:-1, :-1] & sk[1:, :-1] & sk[:-1, 1:] & sk[1:, 1:]).any()


def test_thinning_keeps_small_components_alive():
    # Isolated small blocks must not be annihilated outright.
    data = np.zeros((12, 12), dtype=bool)
    data[2:4, 2:4] = True
    data[7:10, 7:10] = True
    sk = thinning(BinaryGrid(data)).as_mask()
    assert _component_count(sk, 2) == 2


def test_thinning_3d_box():
    g = BinaryGrid(np.pad(np.ones((6, 10, 14), dtype=bool), 2))
    sk = thinning(g).as_mask()
    assert sk.any()
    assert (sk <= g.data).all()
    assert _component_count(sk, 3) == 1
    assert sk.sum() < g.count() // 4
