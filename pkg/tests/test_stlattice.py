import math
import random

import numpy as np
import pytest

from natorder.cda.algebra import build_algebra, left_representation, random_order_element
from natorder.stlattice.blockdet import block_determinant_identity
from natorder.stlattice.codebook import (
    build_codebook,
    codebook_csv,
    parse_constellation,
    read_codebook,
    repeat_first_row,
    write_codebook,
)
from natorder.stlattice.lattice import (
    LatticeError,
    basis_from_matrices,
    gram_and_volume,
    lattice_basis,
    normalized_metrics,
)
from natorder.stlattice.numeric import ComplexMatrix, Embedding, EmbeddingError
from natorder.stlattice.search import certify_points, min_det_matrices, min_determinant


@pytest.fixture(scope="module")
def golden_basis(golden):
    return lattice_basis(golden, "symmetric")


# -- embeddings -------------------------------------------------------------------
def test_identity_embeds_exactly(golden):
    A = build_algebra(golden)
    m = Embedding(golden).matrix(left_representation(A.one))
    assert np.array_equal(m.mid, np.eye(2))
    assert m.error_bound == 0.0


def test_cube_root_of_unity_embedding(q2):
    w = Embedding(q2)(q2.E.gen)
    assert complex(w) == pytest.approx(complex(-0.5, math.sqrt(3) / 2), abs=1e-15)
    assert float(w.rad()) < 1e-30


def test_golden_u_embeds_to_permutation_like_matrix(golden):
    A = build_algebra(golden)
    m = Embedding(golden).matrix(left_representation(A.u))
    assert np.allclose(m.mid, [[0, 1j], [1, 0]])


def test_embedding_needs_precision(catalog):
    with pytest.raises(EmbeddingError):
        Embedding(catalog.get("Qi-2-3"), precision=4)


def test_missing_embedding_is_reported(catalog):
    s = catalog.get("Q-2")
    broken = type(s)(**{**s.__dict__, "embeddings": {}})
    with pytest.raises(EmbeddingError):
        Embedding(broken)


# -- bases ------------------------------------------------------------------------
def test_symmetric_basis_shape(q2):
    b = lattice_basis(q2, "symmetric")
    assert (b.k, b.n) == (4, 2)
    assert all(m.rows == m.cols == 2 for m in b.matrices)


def test_block_basis_of_qi32(catalog):
    b = lattice_basis(catalog.get("Qi-3-2"), "block")
    assert b.n == 6
    assert b.k == 24 and b.rank_over_base == 12
    for m in b.matrices:
        mid = m.mid
        for r in range(6):
            for c in range(6):
                if r // 2 != c // 2:
                    assert mid[r, c] == 0


def test_single_block_degenerates(golden):
    sym = lattice_basis(golden, "symmetric")
    blk = lattice_basis(golden, "block")
    assert blk.flags and blk.mode == "symmetric"
    assert np.array_equal(sym.mids, blk.mids)


def test_symmetric_mode_needs_centre_equal_base(catalog):
    with pytest.raises(LatticeError, match="block mode"):
        lattice_basis(catalog.get("Qi-2-2"), "symmetric")


# -- Gram and volume --------------------------------------------------------------
def test_gram_of_one_by_one_basis():
    gv = gram_and_volume(basis_from_matrices([[[1]], [[1j]]]))
    assert np.allclose(gv.gram, np.eye(2))
    assert gv.nu == pytest.approx(1.0)


def test_gram_scaling():
    mats = [np.array([[1, 0], [0, 1j]]), np.array([[0, 1], [1, 0]]), np.array([[1, 1], [0, 2]])]
    g1 = gram_and_volume(basis_from_matrices(mats))
    g3 = gram_and_volume(basis_from_matrices([3 * m for m in mats]))
    assert np.allclose(g3.gram, 9 * g1.gram)
    assert g3.nu == pytest.approx(27 * g1.nu)


def test_dependent_basis_rejected():
    with pytest.raises(LatticeError, match="singular"):
        gram_and_volume(basis_from_matrices([[[1]], [[2]]]))


def test_catalog_grams_positive_definite(catalog):
    for s in list(catalog) + [catalog.get("golden")]:
        b = lattice_basis(s, "symmetric" if s.L is s.F else "block")
        gv = gram_and_volume(b)
        assert gv.positive_definite, s.id
        assert gv.volume_consistent(), s.id


def test_golden_volume(golden_basis):
    gv = gram_and_volume(golden_basis)
    # float determinant as an independent route to the same volume
    assert math.sqrt(np.linalg.det(gv.gram)) == pytest.approx(gv.nu, rel=1e-12)
    assert gv.nu == pytest.approx(25.0, rel=1e-12)


# -- minimum determinant ------------------------------------------------------------
def test_golden_minimum_determinant(golden_basis):
    res = min_determinant(golden_basis, bound=1)
    assert res.exact == 1 and res.certified
    assert res.argmin == (1, 0, 0, 0, 0, 0, 0, 0)
    assert res.points == 3**8 - 1


def test_identity_codebook():
    assert min_det_matrices([np.eye(2)]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        min_det_matrices([])


def test_scaled_codebook():
    rng = np.random.default_rng(3)
    mats = rng.normal(size=(5, 2, 2)) + 1j * rng.normal(size=(5, 2, 2))
    a = 1.7 - 0.4j
    assert min_det_matrices(a * mats, True) == pytest.approx(abs(a) ** 4 * min_det_matrices(mats, True), rel=1e-10)


def test_workers_do_not_change_result(golden_basis):
    one = min_determinant(golden_basis, bound=1, chunk=500)
    many = min_determinant(golden_basis, bound=1, chunk=500, workers=4)
    assert (one.exact, one.argmin, one.points) == (many.exact, many.argmin, many.points)


def test_desk_limit_and_sampling(catalog):
    b = lattice_basis(catalog.get("Qi-3-2"), "block")
    with pytest.raises(ValueError, match="desk limit"):
        min_determinant(b, bound=1)
    res = min_determinant(b, bound=1, sample=500, seed=3)
    assert res.sampled and not res.certified
    assert res.exact == 1  # basis vectors are always probed


def test_ball_determinants_contain_exact_norms(golden_basis):
    pts = np.random.default_rng(8).integers(-2, 3, size=(30, golden_basis.k))
    assert all(c.contained for c in certify_points(golden_basis, pts))


# -- metrics ------------------------------------------------------------------------
def test_trivial_metrics():
    m = normalized_metrics(1, 1, 8, 2)
    assert m.delta == 1 and m.mu == 1


def test_metric_arithmetic():
    m = normalized_metrics(1, 16, 8, 2)
    assert m.delta == pytest.approx(0.5, rel=1e-15)
    assert m.mu == pytest.approx(1 / 16, rel=1e-15)
    assert m.mu ** (2 / 8) == pytest.approx(m.delta, rel=1e-12)


def test_zero_volume_rejected():
    with pytest.raises(LatticeError):
        normalized_metrics(1, 0, 4, 2)


# -- block determinant --------------------------------------------------------------
def test_block_determinant_of_one_and_u(catalog):
    s = catalog.get("Qi-3-2")
    A = build_algebra(s)
    one = block_determinant_identity(s, A.one)
    assert one.block_det == 1 and one.ok
    u = block_determinant_identity(s, A.u, Embedding(s))
    assert u.ok and u.numeric_agrees
    assert str(u.block_det) == "2 - 2*i"  # N(-(1+i)) = -(1+i)^3


def test_block_determinant_random(catalog):
    s = catalog.get("Q-2-2")
    A = build_algebra(s)
    rng = random.Random(4)
    emb = Embedding(s)
    for _ in range(5):
        rec = block_determinant_identity(s, random_order_element(A, rng, 1), emb)
        assert rec.ok


# -- codebooks ------------------------------------------------------------------------
def test_constellations():
    assert parse_constellation("int:2") == (-2, -1, 0, 1, 2)
    assert parse_constellation("qam4") == (-1, 1)
    assert parse_constellation("QAM16") == (-3, -1, 1, 3)
    with pytest.raises(ValueError):
        parse_constellation("psk8")


def test_codebook_size_and_exact_elements(golden_basis):
    cb = build_codebook(golden_basis, "qam4")
    assert len(cb) == 256
    e = cb.exact_element(5)
    emb = golden_basis.embedding.matrix(left_representation(e))
    assert np.allclose(emb.mid, cb.matrices[5], atol=1e-12)


def test_codebook_csv_round_trip(golden_basis, tmp_path):
    cb = build_codebook(golden_basis, "qam4")
    path = tmp_path / "cb.csv"
    write_codebook(cb, path)
    back = read_codebook(path)
    assert back.header["setup"] == "golden"
    assert np.array_equal(back.coords, cb.coords)
    assert np.array_equal(back.matrices, cb.matrices)
    assert codebook_csv(cb) == path.read_text()


def test_repeat_row_baseline_is_rank_one(golden_basis):
    cb = build_codebook(golden_basis, "qam4")
    base = repeat_first_row(cb.matrices)
    assert np.allclose(np.linalg.det(base), 0)
    assert len({tuple(np.round(m.reshape(-1), 9)) for m in base}) == len(base)


def test_complex_matrix_ops():
    a = ComplexMatrix.from_complex([[1, 2j], [0, 1]])
    b = a @ a.conj_transpose()
    assert np.allclose(b.mid, np.array([[1, 2j], [0, 1]]) @ np.array([[1, 0], [-2j, 1]]))
    assert complex(a.det()) == 1
    assert complex((a + a).trace()) == 4
    blk = ComplexMatrix.block_diagonal([a, ComplexMatrix.identity(1)])
    assert blk.rows == 3 and complex(blk.det()) == 1
