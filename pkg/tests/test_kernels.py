import random

import numpy as np
import pytest

from natorder import _fallback, kernels
from natorder.cda.algebra import build_algebra, random_order_element, reduced_norm
from natorder.exactfield.field import absolute_norm, integral_coordinates
from natorder.stlattice.integer import IntegerData

BACKENDS = ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else [])


@pytest.fixture(scope="module", params=["Q-2", "golden", "Qi-2-3", "Qi-3-2"])
def setup_data(request, catalog):
    s = catalog.get(request.param)
    A = build_algebra(s)
    return s, A, IntegerData.from_algebra(A, s.F)


@pytest.mark.parametrize("backend", BACKENDS)
def test_batch_norms_match_exact_arithmetic(setup_data, backend):
    s, A, data = setup_data
    rng = random.Random(2)
    els = [random_order_element(A, rng, 2) for _ in range(8)]
    pts = np.array([data.point_of(e) for e in els])
    nrs = data.reduced_norms(pts, backend)
    norms = data.norms(pts, backend)
    for e, r, n in zip(els, nrs, norms):
        exact = reduced_norm(e)
        assert [int(v) for v in integral_coordinates(exact, s.L)] == [int(v) for v in r]
        assert absolute_norm(exact) == n


def test_backends_agree_on_large_batch(setup_data):
    if len(BACKENDS) < 2:
        pytest.skip("compiled extension not built")
    _, _, data = setup_data
    pts = np.random.default_rng(1).integers(-3, 4, size=(500, data.k))
    assert data.norms(pts, "compiled") == data.norms(pts, "python")


def test_overflow_rows_are_exact():
    # Q(i) with entries near 2^40: the norm exceeds int64
    T = np.zeros((2, 2, 2), dtype=np.int64)
    T[0, 0] = [1, 0]
    T[0, 1] = T[1, 0] = [0, 1]
    T[1, 1] = [-1, 0]
    x = np.array([[2**40, 3], [5, 2**41 + 1]], dtype=np.int64)
    want = [int(a) ** 2 + int(b) ** 2 for a, b in x]
    for be in BACKENDS:
        assert kernels.abs_norms(T, x, be) == want
    assert _fallback.abs_norms_scalar(T, x[1]) == want[1]


def test_zero_pivot_rows():
    T = np.zeros((2, 2, 2), dtype=np.int64)
    T[0, 0] = [1, 0]
    T[0, 1] = T[1, 0] = [0, 1]
    T[1, 1] = [-1, 0]
    x = np.array([[0, 3], [0, 0]], dtype=np.int64)
    for be in BACKENDS:
        assert kernels.abs_norms(T, x, be) == [9, 0]


@pytest.mark.parametrize("backend", BACKENDS)
def test_ml_decode_tie_breaks_low(backend):
    X = np.array([np.eye(2), np.eye(2), 2 * np.eye(2)], dtype=complex)
    H = np.tile(np.eye(2, dtype=complex), (3, 1, 1))
    Y = np.stack([np.eye(2), 2 * np.eye(2), 1.5 * np.eye(2)]).astype(complex)
    assert list(kernels.ml_decode(Y, H, X, backend)) == [0, 2, 0]


def test_ml_decode_backends_agree():
    if len(BACKENDS) < 2:
        pytest.skip("compiled extension not built")
    rng = np.random.default_rng(4)
    X = rng.normal(size=(64, 2, 2)) + 1j * rng.normal(size=(64, 2, 2))
    H = rng.normal(size=(300, 2, 2)) + 1j * rng.normal(size=(300, 2, 2))
    Y = H @ X[rng.integers(0, 64, 300)] + 0.5 * rng.normal(size=(300, 2, 2))
    assert np.array_equal(kernels.ml_decode(Y, H, X, "compiled"), kernels.ml_decode(Y, H, X, "python"))
