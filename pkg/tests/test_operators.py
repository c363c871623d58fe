import numpy as np
import pytest
import scipy.sparse as sp

from marginsparse.operators import SamplingOperator


def test_apply_matches_matrix_product():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((5, 7))
    op = SamplingOperator(7, np.array([2, 0, 6]), np.array([1.5, 0.5, 2.0]))
    np.testing.assert_allclose(op.apply(X), X @ op.matrix())
    Xs = sp.csr_matrix(X)
    np.testing.assert_allclose(op.apply(Xs).toarray(), X @ op.matrix())


def test_repeated_indices_are_separate_columns():
    op = SamplingOperator(3, np.array([1, 1]), np.array([2.0, 3.0]))
    assert op.r == 2
    R = op.matrix()
    np.testing.assert_allclose(R[:, 0], [0, 2.0, 0])
    np.testing.assert_allclose(R[:, 1], [0, 3.0, 0])
    np.testing.assert_array_equal(op.selected_features(), [1])


def test_identity_operator():
    X = np.arange(12.0).reshape(3, 4)
    op = SamplingOperator.identity(4)
    np.testing.assert_array_equal(op.apply(X), X)
    np.testing.assert_array_equal(op.matrix(), np.eye(4))


def test_validation():
    with pytest.raises(ValueError):
        SamplingOperator(4, np.array([0, 4]), np.array([1.0, 1.0]))  # out of range
    with pytest.raises(ValueError):
        SamplingOperator(4, np.array([0, 1]), np.array([1.0, 0.0]))  # zero weight
    with pytest.raises(ValueError):
        SamplingOperator(4, np.array([0, 1]), np.array([1.0, -2.0]))
    with pytest.raises(ValueError):
        SamplingOperator(4, np.array([0, 1]), np.array([1.0]))  # length mismatch
    with pytest.raises(ValueError):
        SamplingOperator(4, np.array([-1]), np.array([1.0]))


def test_dimension_check_on_apply():
    op = SamplingOperator(4, np.array([0]), np.array([1.0]))
    with pytest.raises(ValueError):
        op.apply(np.zeros((2, 5)))
