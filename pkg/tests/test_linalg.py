"""Tests for centering, covariance, and residualization."""

import numpy as np
import pytest

from blockorder import (
    DataMatrix,
    InvalidInputError,
    SingularMatrixError,
    center,
    covariance,
    residualize,
)
from blockorder.linalg import covariance_blocks, regress_on


def naive_covariance(x):
    """Independent double-loop summation oracle for (1/n) X X^T."""
    p, n = x.shape
    out = np.zeros((p, p))
    for i in range(p):
        for j in range(p):
            s = 0.0
            for t in range(n):
                s += x[i, t] * x[j, t]
            out[i, j] = s / n
    return out


def gauss_jordan_inverse(matrix):
    """Hand-rolled inversion, independent of LAPACK."""
    m = [list(map(float, row)) for row in matrix]
    n = len(m)
    aug = [row + [1.0 if i == j else 0.0 for j in range(n)] for i, row in enumerate(m)]
    for i in range(n):
        pivot = max(range(i, n), key=lambda r: abs(aug[r][i]))
        aug[i], aug[pivot] = aug[pivot], aug[i]
        if abs(aug[i][i]) < 1e-14:
            raise ValueError("singular")
        div = aug[i][i]
        aug[i] = [v / div for v in aug[i]]
        for r in range(n):
            if r != i and aug[r][i] != 0.0:
                factor = aug[r][i]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[i])]
    return np.array([row[n:] for row in aug])


def brute_force_residual(x, s_pos, rest_pos):
    """Normal-equations solve from naive covariance and hand inversion."""
    cov = naive_covariance(x)
    sigma_s = cov[np.ix_(s_pos, s_pos)]
    sigma_sr = cov[np.ix_(s_pos, rest_pos)]
    beta = gauss_jordan_inverse(sigma_s) @ sigma_sr
    return x[rest_pos] - beta.T @ x[s_pos]


class TestCenter:
    def test_simple_row(self):
        out = center(np.array([[1.0, 2.0, 3.0]]))
        assert np.array_equal(out.values, [[-1.0, 0.0, 1.0]])
        assert out.variable_ids == (0,)

    def test_idempotent(self):
        raw = np.random.default_rng(3).standard_normal((3, 40))
        once = center(raw)
        twice = center(once.values)
        assert np.abs(once.values - twice.values).max() < 1e-14

    def test_random_row_means_vanish(self):
        raw = np.random.default_rng(0).uniform(-5, 5, size=(4, 100))
        out = center(raw)
        assert np.all(np.abs(out.values.mean(axis=1)) < 1e-10)

    def test_too_few_samples(self):
        with pytest.raises(InvalidInputError):
            center(np.array([[1.0]]))


class TestDataMatrix:
    def test_rejects_uncentered(self):
        with pytest.raises(InvalidInputError):
            DataMatrix(np.array([[1.0, 2.0, 3.0]]), (0,))

    def test_rejects_duplicate_ids(self):
        with pytest.raises(InvalidInputError):
            DataMatrix(np.array([[1.0, -1.0], [2.0, -2.0]]), (0, 0))

    def test_restrict_preserves_requested_order(self):
        data = center(np.random.default_rng(1).standard_normal((4, 30)))
        sub = data.restrict((3, 1))
        assert sub.variable_ids == (3, 1)
        assert np.array_equal(sub.values[0], data.values[3])

    def test_restrict_unknown_id(self):
        data = center(np.random.default_rng(1).standard_normal((2, 10)))
        with pytest.raises(InvalidInputError):
            data.restrict((0, 7))


class TestCovariance:
    def test_single_variable(self):
        data = center(np.array([[-1.0, 0.0, 1.0]]))
        assert np.allclose(covariance(data), [[2.0 / 3.0]], atol=1e-15)

    def test_identical_rows_rank_one(self):
        row = np.array([0.5, -1.5, 1.0])
        data = center(np.vstack([row, row]))
        cov = covariance(data)
        assert np.allclose(cov, cov[0, 0] * np.ones((2, 2)), atol=1e-15)
        assert abs(np.linalg.det(cov)) < 1e-12

    def test_matches_naive_summation(self):
        data = center(np.random.default_rng(5).standard_normal((5, 1000)))
        assert np.abs(covariance(data) - naive_covariance(data.values)).max() < 1e-10

    def test_symmetric(self):
        data = center(np.random.default_rng(6).standard_normal((6, 200)))
        cov = covariance(data)
        assert np.array_equal(cov, cov.T)


class TestResidualize:
    def test_zero_cross_covariance_leaves_data_unchanged(self):
        # exactly orthogonal integer patterns, already zero-mean
        x_s = np.array([[1.0, -1.0, 1.0, -1.0]])
        x_r = np.array([[1.0, 1.0, -1.0, -1.0]])
        data = DataMatrix(np.vstack([x_s, x_r]), (0, 1))
        out = residualize(data, (0,))
        assert np.array_equal(out.values, x_r)

    def test_perfect_linear_dependence_zero_residual(self):
        base = center(np.array([[1.0, 2.0, -3.0, 0.5, -0.5]])).values[0]
        data = DataMatrix(np.vstack([base, 2.0 * base]), (0, 1))
        out = residualize(data, (0,))
        assert np.abs(out.values).max() < 1e-12

    def test_matches_normal_equations_oracle(self):
        rng = np.random.default_rng(11)
        data = center(rng.standard_normal((6, 500)))
        out = residualize(data, (1, 4))
        expected = brute_force_residual(data.values, [1, 4], [0, 2, 3, 5])
        assert np.abs(out.values - expected).max() < 1e-8

    def test_variable_ids_preserved_in_order(self):
        data = center(np.random.default_rng(2).standard_normal((5, 60)))
        out = residualize(data, (2,))
        assert out.variable_ids == (0, 1, 3, 4)

    def test_residuals_orthogonal_to_predictors(self):
        rng = np.random.default_rng(7)
        data = center(rng.standard_normal((7, 300)))
        out = residualize(data, (0, 3, 6))
        cross = data.restrict((0, 3, 6)).values @ out.values.T / data.n_samples
        assert np.abs(cross).max() < 1e-8

    def test_residual_covariance_is_schur_complement(self):
        rng = np.random.default_rng(8)
        data = center(rng.standard_normal((5, 400)))
        cov = covariance(data)
        blocks = covariance_blocks(cov, [0, 1], [2, 3, 4])
        schur = blocks.sigma_rest - blocks.sigma_s_rest.T @ np.linalg.solve(
            blocks.sigma_s, blocks.sigma_s_rest
        )
        resid_cov = covariance(residualize(data, (0, 1)))
        assert np.abs(resid_cov - schur).max() < 1e-8

    @pytest.mark.parametrize("subset", [(), (0, 1, 2)])
    def test_rejects_empty_and_full_subsets(self, subset):
        data = center(np.random.default_rng(4).standard_normal((3, 30)))
        with pytest.raises(InvalidInputError):
            residualize(data, subset)

    def test_zero_variance_predictor_raises_singularity(self):
        rng = np.random.default_rng(9)
        rows = np.vstack([np.zeros(20), center(rng.standard_normal((1, 20))).values])
        data = DataMatrix(rows, (0, 1))
        with pytest.raises(SingularMatrixError):
            residualize(data, (0,))

    def test_duplicated_predictor_survives_via_ridge(self):
        base = center(np.random.default_rng(10).standard_normal((2, 100)))
        rows = np.vstack([base.values[0], base.values[0], base.values[1]])
        data = DataMatrix(rows, (0, 1, 2))
        out = residualize(data, (0, 1))
        cross = data.restrict((0,)).values @ out.values.T / data.n_samples
        assert np.abs(cross).max() < 1e-6


class TestRegressOn:
    def test_known_coefficients(self):
        rng = np.random.default_rng(12)
        x = center(rng.standard_normal((1, 2000))).values[0]
        y = 1.5 * x + 0.1 * center(rng.standard_normal((1, 2000))).values[0]
        data = DataMatrix(np.vstack([x, y - y.mean()]), (0, 1))
        coef, resid = regress_on(data, (0,))
        assert abs(coef[0, 0] - 1.5) < 0.02
        assert resid.variable_ids == (1,)
