import math

import numpy as np
import pytest
from scipy import special

from src.forward import (
    BoundaryFunction,
    CauchyData,
    DiskGreenTraces,
    DirichletObstacle,
    EmptyDiskReference,
    GreenFunction,
    ImpedanceObstacle,
    NeumannObstacle,
    PenetrableDisk,
    Resolution,
    Scenario,
    assemble_dtn,
    detect_disk_eigenvalue,
    dtn_empty_disk,
    load_cauchy_data,
    load_dtn_matrix,
    mode_orders,
    psi_test_trace,
    save_cauchy_data,
    save_dtn_matrix,
    solve_forward,
    synthesize_cauchy_data,
    tilde_green_function,
    tilde_prime_green_function,
    u0_interior_value,
    u0_reference_trace,
    u0_series_value,
)
from src.forward.boundary import from_knot_values
from src.forward.solver import BoundarySolver
from src.geometry import Circle, Kite, Polygon
from src.presets import TRUE_POLYGON
from src.utils.errors import DomainError, GeometryOverlap, NearDiskEigenvalue, StorageError

R = 5.0
N = 16
J0_FIRST_ZERO = 2.404825557695773


def _annulus_dtn(k, n_modes, a, eta):
    """同心圆障碍物 |x| = a 上 ∂_r u + η u = 0 时 ∂B 上的 DtN 对角元；η = None 表示 u = 0"""
    n = mode_orders(n_modes)
    ka, kr = k * a, k * R
    if eta is None:
        b = -special.jv(n, ka) / special.hankel1(n, ka)
    else:
        b = -(k * special.jvp(n, ka) + eta * special.jv(n, ka)) / (
            k * special.h1vp(n, ka) + eta * special.hankel1(n, ka)
        )
    num = special.jvp(n, kr) + b * special.h1vp(n, kr)
    den = special.jv(n, kr) + b * special.hankel1(n, kr)
    return k * num / den


class TestEmptyDisk:

    def test_a0_zeroth_entry(self):
        a0 = dtn_empty_disk(1.0, R, N)
        center = N // 2
        assert a0.entries[center, center].real == pytest.approx(-1.84451, abs=1e-4)
        assert a0.entries[center, center] == pytest.approx(-special.jv(1, 5.0) / special.jv(0, 5.0), rel=1e-12)

    @pytest.mark.parametrize("k", [1.0, 2.0])
    def test_integral_equation_matches_closed_form(self, k, resolution):
        numeric = assemble_dtn(Scenario(R, k), N, resolution)
        exact = dtn_empty_disk(k, R, N)
        assert np.max(np.abs(numeric - exact)) < 1e-8 * np.max(np.abs(exact.entries))

    def test_near_eigenvalue_is_flagged(self):
        k = J0_FIRST_ZERO / R
        assert detect_disk_eigenvalue(k, R, N).flagged
        with pytest.raises(NearDiskEigenvalue):
            dtn_empty_disk(k, R, N)

    def test_exact_zero_reports_order_and_zero_proximity(self):
        report = detect_disk_eigenvalue(J0_FIRST_ZERO / R, R, N)
        assert report.order == 0
        assert report.proximity < 1e-10

    @pytest.mark.parametrize("n_modes", [16, 128])
    def test_small_wavenumber_is_not_flagged(self, n_modes):
        # kR = 0.05：高阶 J_n 很小但远离零点
        report = detect_disk_eigenvalue(0.01, R, n_modes)
        assert not report.flagged
        assert report.proximity > 0.5
        assert np.all(np.isfinite(dtn_empty_disk(0.01, R, n_modes).entries))

    def test_trace_refuses_vanishing_denominator(self, monkeypatch):
        import src.forward.green as green

        class ZeroOrder:
            @staticmethod
            def jv(order, z):
                value = special.jv(order, z)
                return np.where(np.asarray(order) == 0, 0.0, value)

        monkeypatch.setattr(green, "special", ZeroOrder)
        with pytest.raises(NearDiskEigenvalue) as exc:
            green.psi_trace_matrix((0.5, 0.0), 1.0, R, N)
        assert exc.value.order == 0

    def test_psi_trace_at_eigenvalue_raises(self):
        with pytest.raises(NearDiskEigenvalue):
            psi_test_trace((0.0, 0.0), J0_FIRST_ZERO / R, R, N)


class TestConcentricObstacles:

    @pytest.mark.parametrize(
        "obj,eta",
        [
            (DirichletObstacle(Circle((0.0, 0.0), 1.0)), None),
            (NeumannObstacle(Circle((0.0, 0.0), 1.0)), 0.0),
            (ImpedanceObstacle(Circle((0.0, 0.0), 1.0), -1j), -1j),
        ],
    )
    def test_annulus(self, obj, eta, resolution):
        k = 1.0
        numeric = assemble_dtn(Scenario(R, k, obj), N, resolution)
        exact = _annulus_dtn(k, N, 1.0, eta)
        assert np.allclose(np.diag(numeric.entries), exact, rtol=1e-6, atol=1e-8)
        off = numeric.entries - np.diag(np.diag(numeric.entries))
        assert np.max(np.abs(off)) < 1e-8

    @pytest.mark.parametrize("index", [4.0, 0.25, (2.0 + 1.0j) ** 2])
    def test_penetrable_disk(self, index, resolution):
        k, a = 1.0, 1.0
        disk = PenetrableDisk(Circle((0.0, 0.0), a), index)
        k_in = disk.interior_wavenumber(k)
        n = mode_orders(N)
        lam = k_in * special.jvp(n, k_in * a) / special.jv(n, k_in * a)
        exact = _annulus_dtn(k, N, a, -lam)
        numeric = assemble_dtn(Scenario(R, k, disk), N, resolution)
        assert np.allclose(np.diag(numeric.entries), exact, rtol=1e-6, atol=1e-8)


class TestKiteObstacle:

    def test_reciprocity_and_conjugation(self, resolution):
        dtn = assemble_dtn(Scenario(R, 1.0, DirichletObstacle(Kite())), N, resolution)
        scale = np.max(np.abs(dtn.entries))
        assert dtn.reciprocity_defect() < 1e-6 * scale
        assert dtn.conjugation_defect() < 1e-6 * scale

    def test_dtn_column_matches_single_solve(self, resolution, knot_data):
        scenario = Scenario(R, 1.0, NeumannObstacle(Kite()))
        f = knot_data.resized(N)
        g = solve_forward(scenario, f, resolution)
        dtn = assemble_dtn(scenario, N, resolution)
        assert np.allclose(dtn.apply(f).coefficients, g.coefficients, atol=1e-10)


class TestGreenTraces:

    def test_center_source_coefficient(self):
        trace = psi_test_trace((0.0, 0.0), 1.0, R, N)
        raw = trace.raw_coefficients
        expected = -1.0 / (2.0 * math.pi * R * special.jv(0, R))
        assert raw[N // 2].real == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.1792318, abs=1e-6)
        assert np.allclose(np.delete(raw, N // 2), 0.0, atol=1e-14)

    def test_boundary_solver_reproduces_closed_form(self, resolution):
        z = np.array([[0.5, 0.3], [-1.2, 0.8]])
        numeric = GreenFunction(1.0, R, None, N, resolution).traces(z)
        exact = DiskGreenTraces(1.0, R, N)(z)
        assert np.allclose(numeric, exact, atol=1e-8)

    def test_u0_pairing_matches_series(self, knot_data):
        f = knot_data.resized(N)
        z = (0.5, -0.3)
        assert u0_interior_value(z, f, 1.0) == pytest.approx(u0_series_value(z, f, 1.0), abs=1e-12)

    def test_source_outside_disk_rejected(self):
        with pytest.raises(DomainError):
            psi_test_trace((5.5, 0.0), 1.0, R, N)

    def test_tilde_trace_matches_annulus_series(self, resolution):
        # B̃ 与 B 同心时 Ψ̃ 按模态分离：J/Y 组合在 r = a 和 r = R 上都为零
        k, a = 1.0, 0.5
        z = np.array([[1.5, 0.4], [-0.8, -2.1]])
        numeric = tilde_green_function(k, R, Circle((0.0, 0.0), a), N, resolution).traces(z)

        n = mode_orders(N)[:, None]
        rho = np.hypot(z[:, 0], z[:, 1])[None, :]
        theta = np.arctan2(z[:, 1], z[:, 0])[None, :]
        vanish_at_a = special.jv(n, k * rho) * special.yv(n, k * a) - special.yv(n, k * rho) * special.jv(n, k * a)
        det = special.jv(n, k * a) * special.yv(n, k * R) - special.yv(n, k * a) * special.jv(n, k * R)
        raw = vanish_at_a / (2.0 * math.pi * R * det) * np.exp(-1j * n * theta)
        exact = raw * math.sqrt(2.0 * math.pi * R)
        assert np.allclose(numeric, exact, atol=1e-8)

    def test_tilde_prime_tends_to_disk_green_function(self, resolution):
        z = np.array([[1.5, 0.4]])
        exact = DiskGreenTraces(1.0, R, N)(z)
        gaps = []
        for delta in (1e-2, 1e-4):
            green = tilde_prime_green_function(1.0, R, Circle((0.0, 0.0), 0.5), 1.0 + delta, N, resolution)
            gaps.append(np.max(np.abs(green.traces(z) - exact)))
        assert gaps[1] < 0.05 * gaps[0]
        assert gaps[1] < 1e-4 * np.max(np.abs(exact))


class TestScenario:

    def test_overlap_with_measurement_circle(self):
        with pytest.raises(GeometryOverlap):
            Scenario(R, 1.0, DirichletObstacle(Circle((0.0, 0.0), 4.9995)))

    @pytest.mark.parametrize("k", [0.0, 1.0 - 0.2j])
    def test_wavenumber_domain(self, k):
        with pytest.raises(DomainError):
            Scenario(R, k)

    def test_unit_index_rejected(self):
        with pytest.raises(DomainError):
            PenetrableDisk(Circle((0.0, 0.0), 1.0), 1.0)


class TestSynthesis:

    def test_empty_disk_data_is_a0_f(self, resolution, knot_data):
        f = knot_data.resized(N)
        data = synthesize_cauchy_data(Scenario(R, 2.0), 1.0, f, resolution=resolution)
        expected = u0_reference_trace(EmptyDiskReference(2.0), f)
        assert np.allclose(data.g.coefficients, expected.coefficients, atol=1e-8)

    def test_deterministic(self, resolution, knot_data):
        f = knot_data.resized(N)
        scenario = Scenario(R, 2.0, DirichletObstacle(Circle((0.5, 0.0), 0.5)))
        first = synthesize_cauchy_data(scenario, 1.0, f, resolution=resolution)
        second = synthesize_cauchy_data(scenario, 1.0, f, resolution=resolution)
        assert np.array_equal(first.g.coefficients, second.g.coefficients)
        assert first.meta == second.meta

    def test_sigma_scales_neumann_data(self, resolution, knot_data):
        f = knot_data.resized(N)
        one = synthesize_cauchy_data(Scenario(R, 2.0), 1.0, f, resolution=resolution)
        two = synthesize_cauchy_data(Scenario(R, 2.0), 2.0, f, resolution=resolution)
        assert np.allclose(two.g.coefficients, 2.0 * one.g.coefficients)

    def test_rejects_nonpositive_sigma(self, knot_data):
        with pytest.raises(DomainError):
            synthesize_cauchy_data(Scenario(R, 2.0), 0.0, knot_data)

    def test_knots_fill_the_doubled_band(self, resolution):
        knots = [1.0, 0.0, 2.0, 0.0]
        f = from_knot_values(knots, N, R)
        scenario = Scenario(R, 2.0, DirichletObstacle(Circle((0.5, 0.0), 0.5)))
        data = synthesize_cauchy_data(scenario, 1.0, f, resolution=resolution, knots=knots)

        solver = BoundarySolver(scenario, resolution.refined(2))
        expected = solver.neumann_trace(from_knot_values(knots, 2 * N, R)).resized(N)
        assert np.allclose(data.g.coefficients, expected.coefficients, atol=1e-12)

        # 只补零时 N 以上的模态缺失，偏心障碍物会把它们耦合回低阶
        padded = synthesize_cauchy_data(scenario, 1.0, f, resolution=resolution)
        assert np.max(np.abs(data.g.coefficients - padded.g.coefficients)) > 1e-10


class TestStorage:

    def test_cauchy_file(self, tmp_path, knot_data):
        f = knot_data.resized(N)
        data = u0_reference_trace(EmptyDiskReference(1.0), f)
        original = CauchyData(f, data, {"sigma": 1.0})
        path = save_cauchy_data(original, str(tmp_path / "cauchy.json"))
        loaded = load_cauchy_data(path)
        assert np.array_equal(loaded.g.coefficients, original.g.coefficients)
        assert loaded.meta == {"sigma": 1.0}

    def test_dtn_file(self, tmp_path):
        dtn = dtn_empty_disk(1.0 + 0.1j, R, N)
        loaded = load_dtn_matrix(save_dtn_matrix(dtn, str(tmp_path / "dtn.bin")))
        assert np.array_equal(loaded.entries, dtn.entries)
        assert loaded.wavenumber == dtn.wavenumber

    def test_garbage_file(self, tmp_path):
        path = tmp_path / "broken.bin"
        path.write_bytes(b"\x00" * 16)
        with pytest.raises(StorageError):
            load_dtn_matrix(str(path))
        with pytest.raises(StorageError):
            load_cauchy_data(str(tmp_path / "missing.json"))


def test_boundary_function_from_samples_recovers_basis():
    e = BoundaryFunction.basis(3, N, R)
    again = BoundaryFunction.from_samples(e.samples(64), N, R)
    assert np.allclose(again.coefficients, e.coefficients, atol=1e-13)


def test_knot_data_mean():
    f = from_knot_values([1.0, 0.0, 2.0, 0.0], N, R)
    assert f.raw_coefficients[N // 2] == pytest.approx(0.75)
    assert math.isclose(f.radius, R)


def test_tilde_green_function_is_symmetric(resolution):
    green = tilde_green_function(1.0, R, Circle((0.0, 0.0), 0.5), N, resolution)
    x = np.array([[1.5, 0.5]])
    z = np.array([[-1.0, 2.0]])
    assert green.values(x, z)[0, 0] == pytest.approx(green.values(z, x)[0, 0], abs=1e-8)


# ─────────────────────────────────────────────
# 全尺度：128 模态，∂B 上 512 个节点
# ─────────────────────────────────────────────

FULL_MODES = 128


def _random_pairs(rng, count, r_min=1.0, r_max=4.0, separation=0.3):
    pairs = []
    while len(pairs) < count:
        r = rng.uniform(r_min, r_max, 2)
        t = rng.uniform(0.0, 2.0 * math.pi, 2)
        p = np.stack([r * np.cos(t), r * np.sin(t)], axis=1)
        if np.hypot(*(p[0] - p[1])) > separation:
            pairs.append(p)
    pairs = np.array(pairs)
    return pairs[:, 0], pairs[:, 1]


@pytest.mark.slow
@pytest.mark.parametrize("k", [1.0, 2.0, 8.0])
def test_empty_disk_at_full_scale(k):
    numeric = assemble_dtn(Scenario(R, k), FULL_MODES, Resolution())
    exact = dtn_empty_disk(k, R, FULL_MODES)
    assert np.max(np.abs(numeric - exact)) <= 1e-8 * max(1.0, np.max(np.abs(exact.entries)))


@pytest.mark.slow
def test_dirichlet_annulus_at_full_scale():
    numeric = assemble_dtn(Scenario(R, 1.0, DirichletObstacle(Circle((0.0, 0.0), 1.0))), FULL_MODES, Resolution())
    exact = _annulus_dtn(1.0, FULL_MODES, 1.0, None)
    assert np.allclose(np.diag(numeric.entries), exact, rtol=1e-7, atol=1e-7)


@pytest.mark.slow
@pytest.mark.parametrize("index", [4.0, 0.25])
def test_penetrable_disk_at_full_scale(index):
    disk = PenetrableDisk(Circle((0.0, 0.0), 1.0), index)
    k_in = disk.interior_wavenumber(1.0)
    n = mode_orders(FULL_MODES)
    lam = k_in * special.jvp(n, k_in) / special.jv(n, k_in)
    exact = _annulus_dtn(1.0, FULL_MODES, 1.0, -lam)
    numeric = assemble_dtn(Scenario(R, 1.0, disk), FULL_MODES, Resolution())
    assert np.allclose(np.diag(numeric.entries), exact, rtol=1e-7, atol=1e-7)


@pytest.mark.slow
def test_polygon_dtn_is_reciprocal_at_full_scale():
    dtn = assemble_dtn(Scenario(R, 2.0, DirichletObstacle(Polygon(TRUE_POLYGON))), FULL_MODES, Resolution())
    scale = np.max(np.abs(dtn.entries))
    assert dtn.reciprocity_defect() <= 1e-6 * scale
    assert dtn.conjugation_defect() <= 1e-6 * scale


@pytest.mark.slow
@pytest.mark.parametrize("kind", ["psi", "tilde", "tilde_prime"])
def test_green_functions_are_real_and_symmetric(kind, rng):
    disk = Circle((0.0, 0.0), 0.5)
    if kind == "psi":
        green = GreenFunction(1.0, R, None, FULL_MODES, Resolution())
    elif kind == "tilde":
        green = tilde_green_function(1.0, R, disk, FULL_MODES, Resolution())
    else:
        green = tilde_prime_green_function(1.0, R, disk, 2.0, FULL_MODES, Resolution())
    x, y = _random_pairs(rng, 20)
    there = np.diag(green.values(x, y))
    back = np.diag(green.values(y, x))
    assert np.max(np.abs(there.imag)) <= 1e-7
    assert np.max(np.abs(there - back)) <= 1e-7
