import numpy as np
import pytest
from scipy import ndimage

from cpma.core import (
    CpmaConfig,
    build_lattice,
    connect_cpma,
    extract_cpma,
    score_function,
)
from cpma.errors import DomainError, ParameterError
from cpma.grid import BinaryGrid
from cpma.shapes import disc, l_shape, random_blob_2d, rectangle_with_bump
from cpma.skeleton import mat_indicator
from cpma.transform import dct_forward, lowpass_reconstruct


def test_config_validation():
    with pytest.raises(ParameterError):
        CpmaConfig(tau=0.0)
    with pytest.raises(ParameterError):
        CpmaConfig(tau=1.0)
    with pytest.raises(ParameterError):
        CpmaConfig(max_freq=0)
    assert CpmaConfig().resolved_max_freq((128, 128)) == 64
    assert CpmaConfig().resolved_max_freq((33, 20)) == 17
    assert CpmaConfig(max_freq=500).resolved_max_freq((32, 32)) == 32


def test_score_matches_direct_summation():
    # Recompute the score as an explicit sum of indicator fields.
    g = disc(24, radius=7)
    cfg = CpmaConfig(max_freq=8)
    spec = dct_forward(g)
    acc = np.zeros(g.dims)
    for i in range(1, 8):
        acc += mat_indicator(lowpass_reconstruct(spec, i).data)
    assert np.allclose(score_function(g, cfg), acc / 8.0)


def test_score_range_and_empty_input():
    g = disc(32)
    field = score_function(g)
    assert field.min() >= 0.0 and field.max() < 1.0
    with pytest.raises(DomainError):
        score_function(BinaryGrid(np.zeros((5, 5), dtype=bool)))


def test_extract_cpma_threshold_semantics():
    g = disc(32)
    mat, field = extract_cpma(g, CpmaConfig(tau=0.3))
    expect = (field > 0.3) & g.data
    assert np.array_equal(mat.as_mask(), expect)
    # Higher tau keeps a subset.
    hi, _ = extract_cpma(g, CpmaConfig(tau=0.6))
    assert hi.point_set() <= mat.point_set()


def test_cpma_radii_from_original_shape():
    from cpma.distfield import edt

    g = l_shape(48, arm=30, thickness=9)
    mat, _ = extract_cpma(g)
    df = edt(g)
    assert np.allclose(mat.radii, df.dist[tuple(mat.points.T)])


def test_lattice_weights_and_edges():
    data = np.zeros((4, 4), dtype=bool)
    data[1, 1] = data[1, 2] = data[2, 2] = True
    g = BinaryGrid(data)
    field = np.zeros((4, 4))
    field[1, 1], field[1, 2], field[2, 2] = 0.8, 0.4, 0.6
    graph = build_lattice(g, field)
    edges = {(a, b): w for a, b, w in graph.edges()}
    # Three mutually 8-adjacent nodes -> three edges, each listed once.
    assert set(edges) == {((1, 1), (1, 2)), ((1, 1), (2, 2)), ((1, 2), (2, 2))}
    assert np.isclose(edges[((1, 1), (1, 2))], 1 - (0.8 + 0.4) / 2)
    assert np.isclose(graph.weight((1, 1), (2, 2)), 1 - (0.8 + 0.6) / 2)


def test_lattice_dims_mismatch():
    g = BinaryGrid(np.ones((4, 4), dtype=bool))
    with pytest.raises(ParameterError):
        build_lattice(g, np.zeros((4, 5)))


def _components(mask, ndim=2):
    _, n = ndimage.label(mask, structure=np.ones((3,) * ndim, dtype=bool))
    return n


def test_connect_joins_components_along_high_score_cells():
    # Two skeleton islands inside a bar; the path must prefer the
    # high-score middle row.
    data = np.zeros((7, 13), dtype=bool)
    data[2:5, 1:12] = True
    g = BinaryGrid(data)
    field = np.zeros(g.dims)
    field[3, :] = 0.9  # high-score ridge
    field[2, :] = field[4, :] = 0.1
    mask = np.zeros(g.dims, dtype=bool)
    mask[3, 2] = mask[3, 10] = True
    from cpma.distfield import edt
    from cpma.skeleton import MedialAxisTransform

    mat = MedialAxisTransform.from_mask(mask, edt(g).dist)
    res = connect_cpma(mat, field, g, CpmaConfig())
    assert res.connected and res.n_components == 1
    out = res.mat.as_mask()
    assert out[3, 2:11].all()  # straight along the ridge
    assert (out <= g.data).all()


def test_connect_idempotent_and_single_component():
    for seed in range(5):
        g = random_blob_2d(64, seed=seed)
        mat, field = extract_cpma(g)
        res = connect_cpma(mat, field, g, CpmaConfig())
        assert res.connected and not res.cap_reached
        assert _components(res.mat.as_mask()) == 1
        again = connect_cpma(res.mat, field, g, CpmaConfig())
        assert again.iterations == 0
        assert again.mat.point_set() == res.mat.point_set()


def test_connect_respects_foreground_components():
    # Two separate discs: their skeletons can never be joined, and that
    # does not count as failure.
    data = np.zeros((20, 40), dtype=bool)
    yy, xx = np.mgrid[0:20, 0:40]
    data |= (yy - 10) ** 2 + (xx - 10) ** 2 <= 25
    data |= (yy - 10) ** 2 + (xx - 30) ** 2 <= 25
    g = BinaryGrid(data)
    mat, field = extract_cpma(g)
    res = connect_cpma(mat, field, g, CpmaConfig())
    assert res.connected
    assert res.n_components == 2


def test_connect_rejects_points_outside_foreground():
    from cpma.skeleton import MedialAxisTransform

    g = disc(16)
    mat = MedialAxisTransform(
        points=np.array([[0, 0]], dtype=np.int64), radii=np.array([1.0]), dims=g.dims
    )
    with pytest.raises(ParameterError):
        connect_cpma(mat, np.zeros(g.dims), g)


def _endpoint_count(mask):
    # Degree-1 cells under 8-connectivity.
    n = np.zeros(mask.shape, dtype=int)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == dx == 0:
                continue
            n += np.roll(np.roll(mask, dy, axis=0), dx, axis=1)
    return int((mask & (n == 1)).sum())


def test_bump_branch_is_suppressed():
    # The bump on the rectangle induces a spurious MAT branch; the score
    # threshold removes it, lowering the endpoint (degree-1) count.
    from cpma.skeleton import extract_mat

    g = rectangle_with_bump(128)
    mat = extract_mat(g)
    cpma, field = extract_cpma(g)
    assert _endpoint_count(cpma.as_mask()) < _endpoint_count(mat.as_mask())
    res = connect_cpma(cpma, field, g)
    assert _components(res.mat.as_mask()) == 1
