import numpy as np
import pytest

from pushsum_lab.graph import build_digraph, incidence_matrix
from pushsum_lab.numerics import (
    DimensionMismatchError,
    NonFiniteError,
    matrix_product_accumulate,
    min_norm_least_squares,
    numerical_rank,
)


class TestMinNormLeastSquares:
    def test_identity(self):
        x, res, rank = min_norm_least_squares(np.eye(3), [1.0, 2.0, 3.0])
        assert np.allclose(x, [1, 2, 3], rtol=0, atol=1e-14)
        assert res <= 1e-12
        assert rank == 3

    def test_minimum_norm_split(self):
        # one equation x1 + x2 = 2: the smallest solution splits evenly
        x, res, rank = min_norm_least_squares([[1.0, 1.0]], [2.0])
        assert np.allclose(x, [1.0, 1.0], atol=1e-12)
        assert rank == 1

    def test_normal_equations_residual(self):
        # independent oracle: any least-squares solution zeroes A^T(Ax - b)
        rng = np.random.default_rng(0)
        for m, n in [(20, 30), (30, 20), (50, 50)]:
            a = rng.normal(size=(m, n))
            b = rng.normal(size=m)
            x, _, _ = min_norm_least_squares(a, b)
            atb = a.T @ b
            assert np.linalg.norm(a.T @ (a @ x) - atb) <= 1e-8 * np.linalg.norm(atb)

    def test_normal_equations_large(self):
        rng = np.random.default_rng(7)
        a = rng.normal(size=(2000, 2000)) + 10.0 * np.eye(2000)
        b = rng.normal(size=2000)
        x, res, rank = min_norm_least_squares(a, b)
        atb = a.T @ b
        assert rank == 2000
        assert np.linalg.norm(a.T @ (a @ x) - atb) <= 1e-8 * np.linalg.norm(atb)

    def test_rank_deficient_matches_svd_oracle(self):
        # min-norm solution is unique, so an SVD pseudoinverse must agree
        rng = np.random.default_rng(3)
        base = rng.normal(size=(12, 4))
        a = base @ rng.normal(size=(4, 9))  # rank 4, 12x9
        b = rng.normal(size=12)
        x, _, rank = min_norm_least_squares(a, b)
        assert rank == 4
        assert np.allclose(x, np.linalg.pinv(a) @ b, atol=1e-10)

    def test_underdetermined_residual_zero(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=(4, 10))
        b = rng.normal(size=4)
        x, res, rank = min_norm_least_squares(a, b)
        assert rank == 4
        assert res <= 1e-10 * np.linalg.norm(b)

    def test_zero_matrix(self):
        x, res, rank = min_norm_least_squares(np.zeros((3, 4)), [1.0, 0.0, 0.0])
        assert rank == 0
        assert np.all(x == 0)
        assert res == 1.0

    def test_rejects_non_finite(self):
        with pytest.raises(NonFiniteError):
            min_norm_least_squares([[np.nan, 1.0]], [1.0])
        with pytest.raises(NonFiniteError):
            min_norm_least_squares([[1.0, 1.0]], [np.inf])

    def test_rejects_bad_shapes(self):
        with pytest.raises(DimensionMismatchError):
            min_norm_least_squares(np.eye(3), [1.0, 2.0])


class TestNumericalRank:
    def test_incidence_rank(self):
        g = build_digraph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)])
        assert numerical_rank(incidence_matrix(g)) == 4

    def test_zero_matrix(self):
        assert numerical_rank(np.zeros((4, 6))) == 0

    def test_permutation_invariant(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=(8, 3)) @ rng.normal(size=(3, 7))
        r = numerical_rank(a)
        assert r == 3
        pr = rng.permutation(8)
        pc = rng.permutation(7)
        assert numerical_rank(a[pr][:, pc]) == r

    def test_matches_svd_rank_on_random(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            k = int(rng.integers(1, 6))
            a = rng.normal(size=(10, k)) @ rng.normal(size=(k, 8))
            assert numerical_rank(a) == np.linalg.matrix_rank(a)


class TestMatrixProductAccumulate:
    def test_column_stochastic_closure(self):
        rng = np.random.default_rng(21)
        mats = []
        for _ in range(50):
            a = rng.random((6, 6))
            mats.append(a / a.sum(axis=0))
        prod = matrix_product_accumulate(mats)
        assert np.allclose(prod.sum(axis=0), 1.0, atol=1e-10)

    def test_single_matrix(self):
        a = np.arange(9.0).reshape(3, 3)
        assert np.array_equal(matrix_product_accumulate([a]), a)

    def test_empty_is_identity(self):
        assert np.array_equal(matrix_product_accumulate([], size=4), np.eye(4))
        with pytest.raises(DimensionMismatchError):
            matrix_product_accumulate([])

    def test_order_is_left_to_right(self):
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        b = np.array([[1.0, 0.0], [1.0, 0.0]])
        assert np.array_equal(matrix_product_accumulate([a, b]), a @ b)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            matrix_product_accumulate([np.eye(3), np.eye(4)])
