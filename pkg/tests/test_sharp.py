import math

import numpy as np
import pytest
import scipy.linalg

from src.factorization import picard, picard_many, sharp
from src.forward import BoundaryFunction
from src.utils.errors import DimensionMismatch


def _brute_force_sharp(f):
    re = (f + f.conj().T) / 2
    im = (f - f.conj().T) / 2j
    return scipy.linalg.sqrtm(re @ re) + scipy.linalg.sqrtm(im @ im)


class TestSharp:

    def test_diagonal(self):
        s = sharp(np.diag([1.0, -2.0]))
        assert np.allclose(s.eigenvalues, [2.0, 1.0])
        assert s.cutoff_index == 2

    def test_nilpotent(self):
        s = sharp(np.array([[0.0, 1.0], [0.0, 0.0]]))
        assert np.allclose(s.matrix(), np.eye(2), atol=1e-14)

    def test_imaginary_identity(self):
        s = sharp(1j * np.eye(3))
        assert np.allclose(s.matrix(), np.eye(3), atol=1e-14)

    def test_random_against_matrix_square_roots(self, rng):
        f = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        s = sharp(f)
        assert np.allclose(s.matrix(), _brute_force_sharp(f), atol=1e-8)
        assert np.all(s.eigenvalues >= 0)
        assert np.all(np.diff(s.eigenvalues) <= 0)

    def test_cutoff_drops_tiny_eigenvalues(self):
        s = sharp(np.diag([1.0, 1e-12, 0.5]))
        assert s.cutoff_index == 2

    def test_zero_matrix_has_empty_series(self):
        s = sharp(np.zeros((4, 4)))
        assert s.cutoff_index == 0
        assert s.leading == 0.0

    def test_rejects_rectangular(self):
        with pytest.raises(DimensionMismatch):
            sharp(np.ones((2, 3)))


class TestPicard:

    def test_single_term(self):
        s = sharp(np.diag([4.0, 1.0]))
        assert picard(s, np.array([1.0, 0.0])) == pytest.approx(4.0)

    def test_two_terms(self):
        s = sharp(np.diag([4.0, 1.0]))
        assert picard(s, np.array([1.0, 1.0])) == pytest.approx(0.8)

    def test_zero_data_is_infinite(self):
        s = sharp(np.diag([4.0, 1.0]))
        assert math.isinf(picard(s, np.zeros(2)))

    def test_scaling(self, rng):
        f = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        g = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        base = picard(sharp(f), g)
        assert picard(sharp(3.0 * f), g) == pytest.approx(3.0 * base, rel=1e-10)
        assert picard(sharp(f), 2.0 * g) == pytest.approx(base / 4.0, rel=1e-10)

    def test_monotone_in_component_weight(self):
        s = sharp(np.diag([4.0, 1.0]))
        values = picard_many(s, np.array([[1.0, 1.0, 1.0], [0.5, 1.0, 2.0]]))
        assert np.all(np.diff(values) < 0)

    def test_boundary_function_input(self):
        s = sharp(np.diag([4.0, 1.0]))
        g = BoundaryFunction(np.array([1.0, 0.0]), 1.0)
        assert picard(s, g) == pytest.approx(4.0)

    def test_mode_mismatch(self):
        with pytest.raises(DimensionMismatch):
            picard_many(sharp(np.eye(2)), np.ones(3))
