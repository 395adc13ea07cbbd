import numpy as np
import pytest
from numpy.testing import assert_allclose

from nodalforms.errors import InvalidMatrix, NoConvergence, NotPositiveDefinite
from nodalforms.linalg import (DenseSymMatrix, cholesky_factor, jacobi_eigh,
                               solve_spd)

P3_LAPLACIAN = np.array([[1.0, -1.0, 0.0],
                         [-1.0, 2.0, -1.0],
                         [0.0, -1.0, 1.0]])


def random_symmetric(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    return 0.5 * (a + a.T)


class TestDenseSymMatrix:
    def test_symmetrizes_exactly(self, rng):
        a = random_symmetric(rng, 5)
        a_perturbed = a + 1e-14 * rng.standard_normal((5, 5))
        s = DenseSymMatrix(a_perturbed)
        assert np.array_equal(s.a, s.a.T)

    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidMatrix):
            DenseSymMatrix([[1.0, 2.0], [3.0, 1.0]])

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidMatrix):
            DenseSymMatrix([[np.nan, 0.0], [0.0, 1.0]])

    def test_rejects_nonsquare(self):
        with pytest.raises(InvalidMatrix):
            DenseSymMatrix(np.zeros((2, 3)))

    def test_readonly(self):
        s = DenseSymMatrix(np.eye(2))
        with pytest.raises(ValueError):
            s.a[0, 0] = 7.0


class TestJacobi:
    def test_identity(self):
        ed = jacobi_eigh(np.eye(3))
        assert_allclose(ed.values, [1.0, 1.0, 1.0])
        # vectors form a permutation of the standard basis
        assert_allclose(np.abs(ed.vectors).sum(axis=0), [1.0, 1.0, 1.0])
        assert_allclose(ed.vectors @ ed.vectors.T, np.eye(3), atol=1e-14)

    def test_already_diagonal(self):
        ed = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
        assert_allclose(ed.values, [1.0, 2.0, 3.0])

    def test_path3_laplacian(self):
        # roots of lambda (lambda-1) (lambda-3), worked out by hand
        ed = jacobi_eigh(P3_LAPLACIAN)
        assert_allclose(ed.values, [0.0, 1.0, 3.0], atol=1e-12)

    def test_zero_matrix(self):
        ed = jacobi_eigh(np.zeros((4, 4)))
        assert_allclose(ed.values, np.zeros(4))

    def test_dim_one(self):
        ed = jacobi_eigh([[5.0]])
        assert_allclose(ed.values, [5.0])

    @pytest.mark.parametrize("n", [2, 5, 13, 27, 50])
    def test_reconstruction(self, rng, n):
        s = random_symmetric(rng, n, scale=3.0)
        ed = jacobi_eigh(s)
        rebuilt = ed.vectors @ np.diag(ed.values) @ ed.vectors.T
        assert np.max(np.abs(rebuilt - s)) <= 1e-8 * np.max(np.abs(s))

    @pytest.mark.parametrize("n", [3, 10, 24])
    def test_against_numpy_oracle(self, rng, n):
        s = random_symmetric(rng, n)
        ed = jacobi_eigh(s)
        assert_allclose(ed.values, np.linalg.eigvalsh(s), atol=1e-10)

    def test_orthonormal_vectors(self, rng):
        ed = jacobi_eigh(random_symmetric(rng, 20))
        gram = ed.vectors.T @ ed.vectors
        assert np.max(np.abs(gram - np.eye(20))) <= 1e-10

    def test_shift_invariance(self, rng):
        s = random_symmetric(rng, 12)
        base = jacobi_eigh(s).values
        shifted = jacobi_eigh(s + 2.5 * np.eye(12)).values
        assert_allclose(shifted, base + 2.5, atol=1e-10)

    def test_residual_per_pair(self, rng):
        s = random_symmetric(rng, 15)
        ed = jacobi_eigh(s)
        norm = np.max(np.abs(s))
        for j in range(15):
            r = s @ ed.vectors[:, j] - ed.values[j] * ed.vectors[:, j]
            assert np.max(np.abs(r)) <= 1e-10 * norm

    def test_no_convergence(self, rng):
        with pytest.raises(NoConvergence):
            jacobi_eigh(random_symmetric(rng, 12), max_sweeps=1)

    def test_bad_tolerance(self):
        with pytest.raises(ValueError):
            jacobi_eigh(np.eye(2), eig_tol=0.0)


class TestSolveSpd:
    def test_identity(self):
        assert_allclose(solve_spd(np.eye(2), [4.0, -2.0]), [4.0, -2.0])

    def test_diagonal(self):
        assert_allclose(solve_spd(np.diag([2.0, 5.0]), [2.0, 5.0]), [1.0, 1.0])

    def test_two_by_two(self):
        # [[2,-1],[-1,2]] @ (1,1) = (1,1), inverted by hand
        s = np.array([[2.0, -1.0], [-1.0, 2.0]])
        assert_allclose(solve_spd(s, [1.0, 1.0]), [1.0, 1.0], atol=1e-14)

    @pytest.mark.parametrize("n", [2, 7, 20, 45])
    def test_roundtrip(self, rng, n):
        a = rng.standard_normal((n, n))
        s = a @ a.T + n * np.eye(n)
        x_true = rng.standard_normal(n)
        x = solve_spd(s, s @ x_true)
        assert_allclose(x, x_true, rtol=1e-8)

    def test_residual_contract(self, rng):
        s = random_symmetric(rng, 10) + 10.0 * np.eye(10)
        rhs = rng.standard_normal(10)
        x = solve_spd(s, rhs)
        bound = 1e-9 * (np.max(np.abs(s)) * np.max(np.abs(x))
                        + np.max(np.abs(rhs)))
        assert np.max(np.abs(s @ x - rhs)) <= bound

    def test_matrix_rhs(self, rng):
        a = rng.standard_normal((6, 6))
        s = a @ a.T + 6 * np.eye(6)
        rhs = rng.standard_normal((6, 3))
        x = solve_spd(s, rhs)
        assert_allclose(s @ x, rhs, atol=1e-9)

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            solve_spd(np.diag([1.0, -1.0]), [1.0, 1.0])
        with pytest.raises(NotPositiveDefinite):
            solve_spd(np.zeros((2, 2)), [0.0, 0.0])

    def test_cholesky_factor(self, rng):
        a = rng.standard_normal((8, 8))
        s = a @ a.T + 8 * np.eye(8)
        ell = cholesky_factor(s)
        assert_allclose(ell @ ell.T, s, atol=1e-10)
        assert_allclose(ell, np.tril(ell))
