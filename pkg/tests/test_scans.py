import math

import numpy as np
import pytest

from src.factorization import (
    IndicatorResult,
    SamplingGrid,
    ScanVariant,
    TestDomain,
    coefficient_scan,
    convex_hull_estimate,
    disk_grid_family,
    domain_scan,
    radial_family,
)
from src.forward import CauchyData, EmptyDiskReference, ImpedanceHatReference, MediumHatReference, u0_reference_trace
from src.forward.scenario import ImpedanceObstacle, PenetrableDisk
from src.geometry import Circle
from src.utils.errors import DomainError, NoAcceptedDomains

R = 5.0
N = 16


@pytest.fixture
def empty_disk_data(knot_data):
    f = knot_data.resized(N)
    return CauchyData(f, u0_reference_trace(EmptyDiskReference(2.0), f), {"sigma": 1.0})


class TestTestDomain:

    def test_impedance_signs(self):
        domain = TestDomain(outer=Circle((0.0, 0.0), 2.0), inner=Circle((0.5, 0.0), 0.5))
        outer = domain.outer_object(1.5)
        inner = domain.inner_object(1.5)
        assert isinstance(outer, ImpedanceObstacle) and outer.eta == 1.5j
        assert isinstance(inner, ImpedanceObstacle) and inner.eta == -1.5j
        ref = domain.reference(1.5, ScanVariant.TILDE)
        assert isinstance(ref, ImpedanceHatReference) and ref.disk == domain.inner

    def test_medium_indices(self):
        domain = TestDomain(outer=Circle((0.0, 0.0), 2.0), inner=Circle((0.0, 0.0), 1.0), kind="medium")
        assert isinstance(domain.outer_object(1.0), PenetrableDisk)
        assert domain.outer_object(1.0).index == pytest.approx((2 + 1j) ** 2)
        assert domain.inner_object(1.0).index == pytest.approx((2 - 1j) ** 2)
        assert isinstance(domain.reference(1.0, "tilde"), MediumHatReference)
        assert isinstance(domain.reference(1.0, "classical"), EmptyDiskReference)

    def test_inner_disk_must_fit(self):
        with pytest.raises(DomainError):
            TestDomain(outer=Circle((0.0, 0.0), 1.0), inner=Circle((0.8, 0.0), 0.5))

    def test_separate_hat_disk(self):
        domain = TestDomain(
            outer=Circle((0.0, 0.0), 2.0), inner=Circle((0.0, 0.0), 0.5), hat=Circle((0.5, 0.0), 0.25)
        )
        assert domain.hat_disk == Circle((0.5, 0.0), 0.25)


class TestFamilies:

    def test_radial_family(self):
        family = radial_family((0.5, 0.0))
        assert len(family) == 26
        assert family[0].outer.radius == pytest.approx(0.5)
        assert family[-1].inner.radius == pytest.approx(1.5)
        assert family[3].label == "l=8"

    @pytest.mark.parametrize("r", [1.0, 0.5, 0.25, 0.125])
    def test_disk_grid_count(self, r):
        family = disk_grid_family(r)
        assert len(family) == (round(2 / r) + 1) ** 2
        assert family[0].outer.center == (-2.0, -2.0)
        assert family[-1].outer.center == pytest.approx((2.0, 2.0))
        assert family[1].inner.radius == pytest.approx(r / 2)


class TestCoefficientScan:

    def test_true_coefficients_give_infinite_indicator(self, empty_disk_data, resolution):
        domain = TestDomain(outer=Circle((0.0, 0.0), 2.0), inner=Circle((-0.5, 0.0), 0.25))
        result = coefficient_scan(
            empty_disk_data, domain, [0.5, 1.0, 1.5], [1.5, 2.0, 2.5],
            variant=ScanVariant.CLASSICAL, resolution=resolution,
        )
        assert result.shape == (3, 3)
        assert result.argmax == (1, 1)
        assert result.at(result.argmax) == {"tau": 1.0, "kappa": 2.0}
        assert math.isinf(result.values[1, 1])
        assert np.all(np.isfinite(np.delete(result.values.reshape(-1), 4)))

    def test_empty_grid_rejected(self, empty_disk_data):
        domain = TestDomain(outer=Circle((0.0, 0.0), 2.0), inner=Circle((0.0, 0.0), 1.0))
        with pytest.raises(DomainError):
            coefficient_scan(empty_disk_data, domain, [], [2.0])


class TestDomainScan:

    def test_axes_and_labels(self, empty_disk_data, resolution):
        family = radial_family(ells=[10, 15])
        result = domain_scan(empty_disk_data, family, 1.0, 4.0, ScanVariant.TILDE, resolution)
        assert result.shape == (2,)
        assert result.axes["radius"].tolist() == [1.0, 1.5]
        assert result.label == "domains-tilde"

    def test_rejects_nonpositive_coefficients(self, empty_disk_data):
        with pytest.raises(DomainError):
            domain_scan(empty_disk_data, radial_family(ells=[10]), 0.0, 4.0)


class TestHull:

    @pytest.fixture
    def grid(self):
        return SamplingGrid(x_min=-1.5, x_max=1.5, y_min=-1.5, y_max=1.5, nx=61, ny=61)

    def test_concentric_family_gives_smallest_accepted_disk(self, grid):
        family = radial_family(ells=range(5, 11))
        values = IndicatorResult(values=np.arange(1.0, 7.0), valid=np.ones(6, dtype=bool))
        hull = convex_hull_estimate(family, values, grid, 0.5)
        assert hull.accepted == [3, 4, 5]
        assert hull.contains((0.7, 0.0))
        assert not hull.contains((0.85, 0.0))
        assert hull.area == pytest.approx(math.pi * 0.64, rel=0.05)

    def test_top_quantile_accepts_nothing(self, grid):
        family = radial_family(ells=range(5, 11))
        values = IndicatorResult(values=np.arange(1.0, 7.0), valid=np.ones(6, dtype=bool))
        with pytest.raises(NoAcceptedDomains):
            convex_hull_estimate(family, values, grid, 1.0)

    def test_needs_two_valid_members(self, grid):
        family = radial_family(ells=[5, 6])
        values = IndicatorResult(values=[1.0, 2.0], valid=[True, False])
        with pytest.raises(NoAcceptedDomains):
            convex_hull_estimate(family, values, grid)

    def test_masked_member_never_accepted(self, grid):
        family = radial_family(ells=[5, 6, 7])
        values = IndicatorResult(values=[1.0, 2.0, 99.0], valid=[True, True, False])
        hull = convex_hull_estimate(family, values, grid, 0.0)
        assert 2 not in hull.accepted
