"""
测试函数：修正 Green 函数在 ∂B 上的法向导数

  Ψ_k   = Φ_k + ψ_k    ，Ψ_k = 0 on ∂B               （闭式 Fourier 级数）
  Ψ̃_k  = Φ_k + ψ̃_k   ，Ψ̃_k = 0 on ∂B 和 ∂B̃         （两边界 Dirichlet BIE）
  Ψ̃'_k = Φ_k + ψ̃'_k  ，B̃ 内折射率 ň，Ψ̃'_k = 0 on ∂B （点源的透射散射）

每个 GreenFunction 只分解一次系统矩阵，多个源点 z 作为多右端项批量求解。
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import special

from src.geometry.curves import Circle, PointLocation
from src.numerics.specfun import hankel1_01
from src.utils.errors import DomainError, IllConditioned, NearDiskEigenvalue, TooClose

from .boundary import BoundaryFunction, mode_orders, projection_matrix, reflection_index
from .disk import EIGENVALUE_THRESHOLD, detect_disk_eigenvalue
from .scenario import (
    DirichletObstacle,
    EmptyObject,
    InteriorObject,
    PenetrableDisk,
    Resolution,
    Scenario,
)
from .solver import BoundarySolver

logger = logging.getLogger(__name__)

SOURCE_CLEARANCE = 1e-3
RADIUS_ADJUSTMENT = 1.05


def _points(z) -> np.ndarray:
    p = np.asarray(z, dtype=float)
    return p[None, :] if p.ndim == 1 else p


def fundamental_solution(k: complex, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Φ_k(x_i, z_j) = (i/4) H₀⁽¹⁾(k|x_i − z_j|)"""
    diff = x[:, None, :] - z[None, :, :]
    r = np.sqrt(np.sum(diff ** 2, axis=-1))
    h0, _ = hankel1_01(k * r)
    return 0.25j * h0


def fundamental_normal_derivative(k: complex, x: np.ndarray, normals: np.ndarray, z: np.ndarray) -> np.ndarray:
    """∂Φ_k(x_i, z_j)/∂ν(x_i)"""
    diff = x[:, None, :] - z[None, :, :]
    r = np.sqrt(np.sum(diff ** 2, axis=-1))
    _, h1 = hankel1_01(k * r)
    proj = np.sum(normals[:, None, :] * diff, axis=-1) / r
    return -0.25j * k * h1 * proj


# ─────────────────────────────────────────────
# Ψ_k：圆盘 Green 函数的闭式迹
# ─────────────────────────────────────────────

def psi_trace_matrix(points, k: complex, radius: float, n_modes: int) -> np.ndarray:
    """(N × P)：第 j 列是 ∂_νΨ_k(·, z_j)|_{∂B} 的正交归一系数"""
    z = _points(points)
    rho = np.hypot(z[:, 0], z[:, 1])
    if np.any(rho >= radius - 1e-6):
        raise DomainError(f"source points must lie strictly inside the disk of radius {radius}")
    theta = np.arctan2(z[:, 1], z[:, 0])
    orders = mode_orders(n_modes)
    k = complex(k)

    denom = special.jv(orders, k * radius)
    vanishing = (denom == 0) | ~np.isfinite(denom)
    # n > |kR| 时 J_n(kR) = 0 只是下溢，系数 ~ (|z|/R)^n → 0
    underflow = vanishing & (np.abs(orders) > abs(k * radius))
    if np.any(vanishing & ~underflow):
        n = int(abs(orders[np.argmax(vanishing & ~underflow)]))
        raise NearDiskEigenvalue(n, 0.0, k, radius)
    numer = special.jv(orders[:, None], k * rho[None, :])
    safe = np.where(underflow, 1.0, denom)
    ratio = np.where(underflow[:, None], 0.0, numer / safe[:, None])
    raw = -ratio * np.exp(-1j * np.outer(orders, theta)) / (2.0 * math.pi * radius)
    return raw * math.sqrt(2.0 * math.pi * radius)


def psi_test_trace(
    z,
    k: complex,
    radius: float,
    n_modes: int,
    threshold: float = EIGENVALUE_THRESHOLD,
) -> BoundaryFunction:
    """∂_νΨ_k(·, z)|_{∂B}，原始系数 −J_n(k|z|)/(2πR J_n(kR)) e^{−inθ_z}"""
    detect_disk_eigenvalue(k, radius, n_modes, threshold).raise_if_flagged()
    return BoundaryFunction(psi_trace_matrix(z, k, radius, n_modes)[:, 0], radius)


class DiskGreenTraces:
    """闭式 Ψ_k 迹的批量提供者"""

    def __init__(self, k: complex, radius: float, n_modes: int, threshold: float = EIGENVALUE_THRESHOLD):
        detect_disk_eigenvalue(k, radius, n_modes, threshold).raise_if_flagged()
        self.k = complex(k)
        self.radius = float(radius)
        self.n_modes = n_modes
        self.excluded: Circle | None = None

    def __call__(self, points) -> np.ndarray:
        return psi_trace_matrix(points, self.k, self.radius, self.n_modes)


def u0_interior_value(z, f: BoundaryFunction, k: complex) -> complex:
    """u₀(z) = −∫_{∂B} ∂_νΨ_k(y, z) f(y) ds(y)：双线性配对 Σ f̂_m d̂_{−m}"""
    trace = psi_trace_matrix(z, k, f.radius, f.n_modes)[:, 0]
    ref = reflection_index(f.n_modes)
    ok = ref >= 0
    return complex(-np.sum(f.coefficients[ok] * trace[ref[ok]]))


def u0_series_value(z, f: BoundaryFunction, k: complex) -> complex:
    """u₀(z) = Σ c_n J_n(k|z|)/J_n(kR) e^{inθ_z}"""
    p = _points(z)[0]
    rho, theta = math.hypot(p[0], p[1]), math.atan2(p[1], p[0])
    orders = f.orders
    k = complex(k)
    terms = f.raw_coefficients * special.jv(orders, k * rho) / special.jv(orders, k * f.radius)
    return complex(np.sum(terms * np.exp(1j * orders * theta)))


# ─────────────────────────────────────────────
# Ψ̃_k / Ψ̃'_k：数值 Green 函数
# ─────────────────────────────────────────────

class GreenFunction:
    """Ψ(x, z) = Φ_k(x, z) + ψ(x, z)，ψ 为场景中以 −Φ_k(·, z) 为入射场的散射解"""

    def __init__(
        self,
        k: complex,
        radius: float,
        obj: InteriorObject | None = None,
        n_modes: int = 128,
        resolution: Resolution | None = None,
        config: dict | None = None,
    ):
        self.scenario = Scenario(radius, k, obj or EmptyObject())
        self.solver = BoundarySolver(self.scenario, resolution, config)
        self.k = self.scenario.wavenumber
        self.radius = self.scenario.outer_radius
        self.n_modes = n_modes
        curve = self.scenario.obj.curve
        self.excluded: Circle | None = curve if isinstance(curve, Circle) else None

    def _check_sources(self, z: np.ndarray) -> None:
        rho = np.hypot(z[:, 0], z[:, 1])
        if np.any(rho > self.radius - SOURCE_CLEARANCE):
            raise TooClose(f"source points must stay {SOURCE_CLEARANCE} inside the measurement circle")
        curve = self.scenario.obj.curve
        if curve is not None:
            for p in z:
                d = curve.distance_to(p)
                if d < SOURCE_CLEARANCE or curve.contains_point(p) is not PointLocation.OUTSIDE:
                    raise TooClose(f"source point {p.tolist()} is not outside the {curve.kind} with clearance")

    def densities(self, sources) -> np.ndarray:
        z = _points(sources)
        self._check_sources(z)
        solver = self.solver
        outer_rhs = -fundamental_solution(self.k, solver.outer.points, z)
        inner_rhs = None
        if solver.inner is not None:
            u_inc = fundamental_solution(self.k, solver.inner.points, z)
            du_inc = fundamental_normal_derivative(self.k, solver.inner.points, solver.inner.normals, z)
            inner_rhs = -solver.inner_condition(u_inc, du_inc)
        return solver.solve(outer_rhs, inner_rhs)

    def traces(self, sources) -> np.ndarray:
        """(N × P)：∂_νΨ(·, z_j)|_{∂B} 的正交归一系数"""
        z = _points(sources)
        dens = self.densities(z)
        solver = self.solver
        d_inc = fundamental_normal_derivative(self.k, solver.outer.points, solver.outer.normals, z)
        samples = d_inc + solver.normal_derivative(dens)
        proj = projection_matrix(self.n_modes, self.radius, solver.n_outer)
        return proj @ samples

    __call__ = traces

    def values(self, x_points, sources) -> np.ndarray:
        """Ψ(x_i, z_j)"""
        x = _points(x_points)
        z = _points(sources)
        dens = self.densities(z)
        return fundamental_solution(self.k, x, z) + self.solver.field(dens, x).reshape(len(x), len(z))


def _with_radius_retry(build, disk: Circle):
    """k² 接近 B∖B̃ 的特征值时，B̃ 半径放大 5% 重试一次"""
    try:
        return build(disk)
    except IllConditioned as e:
        adjusted = Circle(disk.center, disk.radius * RADIUS_ADJUSTMENT)
        logger.warning(
            f"Auxiliary disk radius {disk.radius:.4g} is near an eigenvalue "
            f"(cond {e.condition:.3g}); retrying with radius {adjusted.radius:.4g}"
        )
        return build(adjusted)


def tilde_green_function(
    k: complex,
    radius: float,
    disk: Circle,
    n_modes: int = 128,
    resolution: Resolution | None = None,
    config: dict | None = None,
) -> GreenFunction:
    """Ψ̃_k：∂B 和 ∂B̃ 上都为零"""
    return _with_radius_retry(
        lambda d: GreenFunction(k, radius, DirichletObstacle(d), n_modes, resolution, config), disk
    )


def tilde_prime_green_function(
    k: complex,
    radius: float,
    disk: Circle,
    index: float,
    n_modes: int = 128,
    resolution: Resolution | None = None,
    config: dict | None = None,
) -> GreenFunction:
    """Ψ̃'_k：B̃ 内为实折射率 ň 的介质"""
    index_c = complex(index)
    if index_c.imag != 0:
        raise DomainError(f"the auxiliary refractive index must be real, got {index}")
    return _with_radius_retry(
        lambda d: GreenFunction(k, radius, PenetrableDisk(d, index_c.real), n_modes, resolution, config),
        disk,
    )


def psi_tilde_test_trace(
    z,
    k: complex,
    radius: float,
    n_modes: int,
    disk: Circle,
    resolution: Resolution | None = None,
    config: dict | None = None,
) -> BoundaryFunction:
    green = tilde_green_function(k, radius, disk, n_modes, resolution, config)
    return BoundaryFunction(green.traces(z)[:, 0], radius)


def psi_tilde_prime_test_trace(
    z,
    k: complex,
    radius: float,
    n_modes: int,
    disk: Circle,
    index: float,
    resolution: Resolution | None = None,
    config: dict | None = None,
) -> BoundaryFunction:
    green = tilde_prime_green_function(k, radius, disk, index, n_modes, resolution, config)
    return BoundaryFunction(green.traces(z)[:, 0], radius)
