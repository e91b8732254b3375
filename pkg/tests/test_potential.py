import math

import numpy as np
import pytest
from scipy import special

from src.geometry import Circle, Kite, sample_curve
from src.potential import (
    LayerKernel,
    LayerVariant,
    assemble_block,
    evaluate_field,
    log_quadrature_weights,
)
from src.utils.errors import DomainError, TooClose


class TestLogWeights:

    def test_constant_integrates_to_zero(self):
        r = log_quadrature_weights(32)
        assert np.allclose(r.sum(axis=1), 0.0, atol=1e-12)

    @pytest.mark.parametrize("order", [1, 2, 5])
    def test_trigonometric_moments(self, order):
        # ∫ ln(4 sin²(t/2)) cos(mt) dt = −2π/m
        m = 32
        t = 2 * math.pi * np.arange(m) / m
        r = log_quadrature_weights(m)
        assert r[0] @ np.cos(order * t) == pytest.approx(-2 * math.pi / order, abs=1e-12)

    def test_odd_node_count_rejected(self):
        with pytest.raises(DomainError):
            log_quadrature_weights(31)


class TestSingleLayerOnCircle:

    @pytest.mark.parametrize("n", [0, 1, 3])
    @pytest.mark.parametrize("k", [1.0, 2.0 + 0.5j])
    def test_fourier_eigenvalue(self, n, k):
        quad = sample_curve(Circle((0.0, 0.0), 1.0), 64)
        s = assemble_block(LayerKernel(LayerVariant.SINGLE, k), quad, quad)
        phi = np.exp(1j * n * quad.parameter)
        expected = 0.5j * math.pi * special.jv(n, k) * special.hankel1(n, k)
        assert np.allclose(s @ phi, expected * phi, atol=1e-10)


class TestLaplaceGauss:

    def test_double_layer_of_one(self):
        quad = sample_curve(Kite(), 128)
        kernel = LayerKernel(LayerVariant.DOUBLE, laplace=True)
        k = assemble_block(kernel, quad, quad)
        assert np.allclose(k @ np.ones(quad.size), -0.5, atol=1e-10)
        inside = evaluate_field(kernel, quad, np.ones(quad.size), [[0.0, 0.0]])
        outside = evaluate_field(kernel, quad, np.ones(quad.size), [[4.0, 0.0]])
        assert inside[0] == pytest.approx(-1.0, abs=1e-8)
        assert outside[0] == pytest.approx(0.0, abs=1e-8)


def test_field_refuses_points_on_boundary():
    quad = sample_curve(Circle((0.0, 0.0), 1.0), 64)
    kernel = LayerKernel(LayerVariant.SINGLE, 1.0)
    with pytest.raises(TooClose):
        evaluate_field(kernel, quad, np.ones(quad.size), [quad.points[3]])


def test_kernel_rejects_lower_half_plane_wavenumber():
    with pytest.raises(DomainError):
        LayerKernel(LayerVariant.SINGLE, 1.0 - 0.1j)
