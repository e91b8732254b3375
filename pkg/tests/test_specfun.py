import numpy as np
import pytest

from src.numerics.specfun import bessel_jy, disk_eigenvalue_proximity, hankel1_orders01, log_derivative_j
from src.utils.errors import DomainError

J0_FIRST_ZERO = 2.404825557695773


class TestBesselJY:

    def test_reference_values(self):
        p = bessel_jy(0, 1.0)
        assert p.j == pytest.approx(0.7651976865579666, abs=1e-14)
        assert p.y == pytest.approx(0.0882569642156769, abs=1e-13)
        assert bessel_jy(1, 5.0).j == pytest.approx(-0.3275791375914652, abs=1e-14)

    @pytest.mark.parametrize("n,x", [(0, 0.3), (3, 2.0), (20, 5.0), (60, 80.0)])
    def test_wronskian(self, n, x):
        p = bessel_jy(n, x)
        assert p.wronskian_residual < 1e-10 * max(1.0, abs(p.j * p.yp) + abs(p.jp * p.y))

    def test_derivative_recurrence(self):
        # J_0' = −J_1
        assert bessel_jy(0, 3.0).jp == pytest.approx(-bessel_jy(1, 3.0).j, abs=1e-14)

    @pytest.mark.parametrize("n,x", [(-1, 1.0), (300, 1.0), (0, 0.0), (2, -1.0)])
    def test_domain(self, n, x):
        with pytest.raises(DomainError):
            bessel_jy(n, x)


class TestHankel:

    def test_real_argument_matches_j_plus_iy(self):
        h0, h1 = hankel1_orders01(1.0)
        assert h0 == pytest.approx(complex(0.7651976865579666, 0.0882569642156769), abs=1e-13)
        assert h1.real == pytest.approx(bessel_jy(1, 1.0).j, abs=1e-14)

    @pytest.mark.parametrize("z", [0.0, 1.0 - 0.5j, 1e-14, 500.0])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            hankel1_orders01(z)


def test_log_derivative_symmetric_in_order():
    orders = np.array([-3, 3, -1, 1])
    r = log_derivative_j(orders, 2.5 + 0.1j)
    assert r[0] == pytest.approx(r[1])
    assert r[2] == pytest.approx(r[3])


def test_log_derivative_high_order_does_not_underflow():
    r = log_derivative_j(np.array([250]), 1.0)
    assert np.isfinite(r[0])
    assert r[0].real == pytest.approx(250.0, rel=1e-2)


def test_proximity_vanishes_at_bessel_zero():
    near = disk_eigenvalue_proximity(np.array([0]), J0_FIRST_ZERO)[0]
    far = disk_eigenvalue_proximity(np.array([0]), 1.0)[0]
    assert near < 1e-10
    assert far > 0.5


def test_log_derivative_blows_up_at_low_order_zero():
    r = log_derivative_j(np.array([0]), J0_FIRST_ZERO)
    assert abs(r[0]) > 1e10


def test_proximity_is_scale_free_at_small_argument():
    p = disk_eigenvalue_proximity(np.arange(0, 65), 0.05)
    assert np.all(p > 0.5)


def test_proximity_high_order_stays_order_one():
    p = disk_eigenvalue_proximity(np.array([40, 120, 250]), 3.0)
    assert np.all(p > 0.5)
