import numpy as np
import pytest

from cpma.errors import ParameterError
from cpma.grid import BinaryGrid
from cpma.transform import SpectralField, dct_forward, idct_full, lowpass_reconstruct, lowpass_values

from conftest import SUITE_2D, SUITE_3D, load_fixture, random_grid


def dct2_reference(a):
    """Direct O(n^2) orthonormal DCT-II along one axis."""
    n = len(a)
    out = np.zeros(n)
    for k in range(n):
        s = sum(a[j] * np.cos(np.pi * (2 * j + 1) * k / (2 * n)) for j in range(n))
        scale = np.sqrt(1.0 / n) if k == 0 else np.sqrt(2.0 / n)
        out[k] = scale * s
    return out


def test_forward_matches_direct_summation():
    rng = np.random.default_rng(0)
    g = random_grid(rng, (4, 5))
    spec = dct_forward(g)
    a = g.data.astype(np.float64)
    # Separable reference: transform rows, then columns.
    ref = np.array([dct2_reference(row) for row in a])
    ref = np.array([dct2_reference(col) for col in ref.T]).T
    assert np.allclose(spec.coeffs, ref, atol=1e-12)


@pytest.mark.parametrize("name", SUITE_2D + SUITE_3D)
def test_round_trip_on_fixtures(name):
    g = load_fixture(name)
    vals = idct_full(dct_forward(g))
    assert np.abs(vals - g.data.astype(np.float64)).max() < 1e-9


def test_constant_image_is_pure_dc():
    g = BinaryGrid(np.ones((8, 8), dtype=bool))
    spec = dct_forward(g)
    coeffs = spec.coeffs.copy()
    dc = coeffs[0, 0]
    coeffs[0, 0] = 0.0
    assert np.abs(coeffs).max() < 1e-12
    assert np.isclose(dc, 8.0)  # orthonormal DC of an all-ones 8x8 image


def test_full_band_reconstruction_is_exact():
    rng = np.random.default_rng(5)
    for dims in [(6, 9), (5, 5, 7)]:
        g = random_grid(rng, dims)
        rec = lowpass_reconstruct(dct_forward(g), max(dims))
        assert np.array_equal(rec.data, g.data)


def test_lowpass_keeps_cube_region():
    rng = np.random.default_rng(1)
    g = random_grid(rng, (8, 12))
    spec = dct_forward(g)
    i = 3
    kept = np.zeros_like(spec.coeffs)
    kept[:i, :i] = spec.coeffs[:i, :i]
    ref = idct_full(SpectralField(kept))
    assert np.allclose(lowpass_values(spec, i), ref, atol=1e-12)


def test_lowpass_frequency_bounds():
    g = BinaryGrid(np.ones((4, 6), dtype=bool))
    spec = dct_forward(g)
    with pytest.raises(ParameterError):
        lowpass_values(spec, 0)
    with pytest.raises(ParameterError):
        lowpass_values(spec, 7)
    lowpass_values(spec, 6)  # max axis extent is allowed


def test_binarization_threshold():
    # A half-filled 1D-profile image: the DC-only reconstruction is a
    # constant equal to the fill fraction, so the threshold decides
    # everything.
    data = np.zeros((4, 8), dtype=bool)
    data[:, :6] = True  # fill fraction 0.75
    g = BinaryGrid(data)
    spec = dct_forward(g)
    assert lowpass_reconstruct(spec, 1, bin_threshold=0.5).data.all()
    assert not lowpass_reconstruct(spec, 1, bin_threshold=0.8).data.any()


def test_symmetric_input_binarizes_symmetrically():
    # Mirror symmetry of the input must survive rounding + binarization.
    rng = np.random.default_rng(9)
    half = rng.random((16, 8)) < 0.5
    data = np.concatenate([half, half[:, ::-1]], axis=1)
    spec = dct_forward(BinaryGrid(data))
    for i in (2, 5, 9):
        rec = lowpass_reconstruct(spec, i).data
        assert np.array_equal(rec, rec[:, ::-1])
