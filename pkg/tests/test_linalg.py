import numpy as np
import pytest

from src.numerics.linalg import LUFactorization, hermitian_eig, lu_solve, max_norm
from src.utils.errors import DimensionMismatch, NotHermitian, SingularMatrix


def _random_complex(rng, n, m=None):
    shape = (n, m if m is not None else n)
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestLuSolve:

    def test_solves_random_system(self, rng):
        a = _random_complex(rng, 12)
        x = _random_complex(rng, 12, 1)
        assert np.allclose(lu_solve(a, a @ x), x, atol=1e-10)

    def test_multiple_right_hand_sides_reuse_factorization(self, rng):
        a = _random_complex(rng, 10)
        lu = LUFactorization.factor(a)
        b = _random_complex(rng, 10, 4)
        assert np.allclose(a @ lu.solve(b), b, atol=1e-10)
        assert np.isfinite(lu.condition_estimate())

    def test_singular_matrix_reports_pivot(self):
        a = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex)
        with pytest.raises(SingularMatrix) as exc:
            lu_solve(a, np.ones(2))
        assert exc.value.pivot_index == 1

    def test_rejects_rectangular(self, rng):
        with pytest.raises(DimensionMismatch):
            LUFactorization.factor(_random_complex(rng, 3, 4))

    def test_rhs_length_mismatch(self, rng):
        lu = LUFactorization.factor(_random_complex(rng, 4))
        with pytest.raises(DimensionMismatch):
            lu.solve(np.ones(5))


class TestHermitianEig:

    def test_descending_and_reconstructs(self, rng):
        b = _random_complex(rng, 8)
        a = b + b.conj().T
        eig = hermitian_eig(a)
        assert np.all(np.diff(eig.eigenvalues) <= 0)
        assert max_norm(eig.reconstruct() - a) < 1e-10 * max_norm(a)
        assert np.allclose(eig.eigenvectors.conj().T @ eig.eigenvectors, np.eye(8), atol=1e-10)

    def test_diagonal(self):
        eig = hermitian_eig(np.diag([1.0, 3.0, 2.0]))
        assert np.allclose(eig.eigenvalues, [3.0, 2.0, 1.0])

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eig(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_max_norm_of_empty_is_zero():
    assert max_norm(np.zeros((0, 0))) == 0.0
