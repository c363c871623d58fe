import numpy as np
import pytest
import scipy.sparse as sp

from marginsparse.errors import DataError, NumericalError
from marginsparse.linalg import (orthonormality_defect, require_orthonormal,
                                 row_norms_sq, spectral_norm, thin_svd)
from oracles import eig_spectral_norm


def test_thin_svd_diagonal():
    F = thin_svd(np.diag([3.0, 1.0]))
    assert F.rank == 2
    np.testing.assert_allclose(F.singular_values, [3.0, 1.0])
    np.testing.assert_allclose(np.abs(F.U), np.eye(2), atol=1e-12)
    np.testing.assert_allclose(np.abs(F.V), np.eye(2), atol=1e-12)


def test_thin_svd_zero_matrix():
    F = thin_svd(np.zeros((3, 4)))
    assert F.rank == 0
    assert F.U.shape == (3, 0) and F.V.shape == (4, 0)
    np.testing.assert_array_equal(F.reconstruct(), np.zeros((3, 4)))


def test_thin_svd_low_rank_product():
    rng = np.random.default_rng(3)
    M = rng.standard_normal((10, 3)) @ rng.standard_normal((3, 6))
    F = thin_svd(M)
    assert F.rank == 3
    assert eig_spectral_norm(M - F.reconstruct()) <= 1e-8
    # singular values must match the Gram eigendecomposition oracle
    ev = np.linalg.eigvalsh(M.T @ M)[::-1][:3]
    np.testing.assert_allclose(F.singular_values, np.sqrt(np.maximum(ev, 0)),
                               rtol=1e-10)


def test_thin_svd_reconstruction_sweep():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(1, 51))
        d = int(rng.integers(1, 81))
        M = rng.standard_normal((n, d))
        F = thin_svd(M)
        s1 = F.singular_values[0] if F.rank else 0.0
        assert eig_spectral_norm(M - F.reconstruct()) <= 1e-6 * max(s1, 1e-300)
        assert orthonormality_defect(F.U) <= 1e-8
        assert orthonormality_defect(F.V) <= 1e-8
        assert np.all(np.diff(F.singular_values) <= 0)


def test_thin_svd_truncates_tiny_singular_values():
    rng = np.random.default_rng(5)
    U = np.linalg.qr(rng.standard_normal((8, 3)))[0]
    V = np.linalg.qr(rng.standard_normal((7, 3)))[0]
    M = U @ np.diag([5.0, 2.0, 5e-12]) @ V.T
    assert thin_svd(M).rank == 2
    assert thin_svd(M, rank_threshold=1e-14).rank == 3


def test_thin_svd_sparse_matches_dense():
    rng = np.random.default_rng(11)
    M = rng.standard_normal((9, 5))
    M[M < 0.5] = 0.0
    F = thin_svd(sp.csr_matrix(M))
    np.testing.assert_allclose(F.singular_values,
                               thin_svd(M).singular_values, rtol=1e-12)


def test_thin_svd_rejects_nonfinite():
    with pytest.raises(DataError):
        thin_svd(np.array([[1.0, np.nan]]))
    with pytest.raises(DataError):
        thin_svd(np.array([[np.inf, 1.0]]))
    with pytest.raises(DataError):
        thin_svd(np.array([1.0, 2.0]))  # 1-d


def test_spectral_norm_trivial():
    assert spectral_norm(np.diag([3.0, 1.0])) == pytest.approx(3.0)
    assert spectral_norm(np.eye(5)) == pytest.approx(1.0)
    assert spectral_norm(np.zeros((4, 2))) == 0.0


def test_spectral_norm_2x2_closed_form():
    # eigenvalues of M'M for [[1,2],[3,4]] are (30 +- sqrt(884))/2
    expected = np.sqrt((30.0 + np.sqrt(884.0)) / 2.0)
    got = spectral_norm(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert got == pytest.approx(expected, rel=1e-9)
    assert got == pytest.approx(5.4649857, rel=1e-6)


def test_spectral_norm_matches_svd_and_transpose():
    rng = np.random.default_rng(1)
    for _ in range(20):
        M = rng.standard_normal((int(rng.integers(1, 40)),
                                 int(rng.integers(1, 40))))
        s1 = thin_svd(M).singular_values[0]
        assert spectral_norm(M) == pytest.approx(s1, rel=1e-6)
        assert spectral_norm(M.T) == spectral_norm(M)


def test_spectral_norm_sparse():
    M = sp.csr_matrix(np.array([[0.0, 2.0], [0.0, 0.0]]))
    assert spectral_norm(M) == pytest.approx(2.0)


def test_row_norms_sq():
    np.testing.assert_allclose(row_norms_sq(np.eye(3)), [1, 1, 1])
    np.testing.assert_allclose(row_norms_sq(np.array([[3.0, 4.0]])), [25.0])
    S = sp.csr_matrix(([2.0, -1.0], ([0, 0], [2, 5])), shape=(1, 6))
    np.testing.assert_allclose(row_norms_sq(S), [5.0])


def test_require_orthonormal():
    rng = np.random.default_rng(2)
    Q = np.linalg.qr(rng.standard_normal((10, 4)))[0]
    require_orthonormal(Q)  # no raise
    with pytest.raises(NumericalError):
        require_orthonormal(2.0 * Q)
