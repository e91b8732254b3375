"""
Helmholtz 层势的 Nyström 离散

核函数（基本解 Φ_k(x,y) = (i/4) H₀⁽¹⁾(k|x−y|)）：
  - single          S φ(x)  = ∫ Φ_k(x,y) φ(y) ds(y)
  - double          K φ(x)  = ∫ ∂Φ_k(x,y)/∂ν(y) φ(y) ds(y)
  - adjoint_double  K'φ(x)  = ∫ ∂Φ_k(x,y)/∂ν(x) φ(y) ds(y)

同一曲线上的自作用块按对数奇异性拆分 L = L₁ ln(4 sin²((t−τ)/2)) + L₂，
L₁ 部分用 quadrature.log_quadrature_weights，L₂ 用梯形规则；
不同曲线之间直接用加权梯形规则。laplace=True 时核换成 −ln r / 2π，用于标定。
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.geometry.mesh import BoundaryQuadrature
from src.numerics.specfun import bessel_j, hankel1_01
from src.utils.errors import DomainError, GeometryOverlap, TooClose

from .quadrature import log_quadrature_weights, smooth_quadrature_weight

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061
OVERLAP_DISTANCE = 1e-6
NEAR_FIELD_DISTANCE = 1e-3

# 场点分块，限制 (点数 × 节点数) 临时数组的大小
_CHUNK = 2048


class LayerVariant(str, Enum):
    SINGLE = "single"
    DOUBLE = "double"
    ADJOINT_DOUBLE = "adjoint_double"


@dataclass(frozen=True)
class LayerKernel:
    variant: LayerVariant
    wavenumber: complex = 1.0
    laplace: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variant", LayerVariant(self.variant))
        k = complex(self.wavenumber)
        object.__setattr__(self, "wavenumber", k)
        if self.laplace:
            return
        if k == 0:
            raise DomainError("wavenumber must be nonzero (use laplace=True for the static kernel)")
        if k.imag < 0:
            raise DomainError(f"wavenumber must have Im k >= 0, got {k}")

    def with_variant(self, variant: LayerVariant | str) -> "LayerKernel":
        return LayerKernel(variant=LayerVariant(variant), wavenumber=self.wavenumber, laplace=self.laplace)

    # ── 点对核函数 ──────────────────────────────

    def _radial(self, r: np.ndarray):
        """返回 (Φ(r), ∂Φ/∂r / r 的负值系数)，分别用于 single 和 double 核"""
        if self.laplace:
            return -np.log(r) / (2.0 * math.pi), 1.0 / (2.0 * math.pi * r ** 2)
        k = self.wavenumber
        h0, h1 = hankel1_01(k * r)
        return 0.25j * h0, 0.25j * k * h1 / r

    def values(self, x: np.ndarray, y: np.ndarray, ny: np.ndarray, nx: np.ndarray | None = None) -> np.ndarray:
        """核函数矩阵 K(x_i, y_j)（不含求积权重）"""
        diff = x[:, None, :] - y[None, :, :]
        r = np.sqrt(np.sum(diff ** 2, axis=-1))
        phi, dphi = self._radial(r)
        if self.variant is LayerVariant.SINGLE:
            return phi.astype(np.complex128)
        if self.variant is LayerVariant.DOUBLE:
            return dphi * np.sum(ny[None, :, :] * diff, axis=-1)
        if nx is None:
            raise DomainError("adjoint double layer needs target normals")
        return -dphi * np.sum(nx[:, None, :] * diff, axis=-1)

    def gradients(self, x: np.ndarray, d: np.ndarray, y: np.ndarray, ny: np.ndarray) -> np.ndarray:
        """d_i·∇_x K(x_i, y_j)；adjoint_double 与 single 共用势函数 S 的梯度"""
        diff = x[:, None, :] - y[None, :, :]
        r2 = np.sum(diff ** 2, axis=-1)
        r = np.sqrt(r2)
        d_dot = np.sum(d[:, None, :] * diff, axis=-1)

        if self.variant is not LayerVariant.DOUBLE:
            if self.laplace:
                return -d_dot / (2.0 * math.pi * r2)
            k = self.wavenumber
            _, h1 = hankel1_01(k * r)
            return -0.25j * k * h1 * d_dot / r

        n_dot = np.sum(ny[None, :, :] * diff, axis=-1)
        dn = np.sum(d[:, None, :] * ny[None, :, :], axis=-1)
        if self.laplace:
            return (dn / r2 - 2.0 * d_dot * n_dot / r2 ** 2) / (2.0 * math.pi)
        k = self.wavenumber
        h0, h1 = hankel1_01(k * r)
        return 0.25j * k * ((k * h0 / r - 2.0 * h1 / r2) * d_dot * n_dot / r + h1 * dn / r)


# ─────────────────────────────────────────────
# 矩阵装配
# ─────────────────────────────────────────────

def _self_block(kernel: LayerKernel, quad: BoundaryQuadrature) -> np.ndarray:
    m = quad.size
    x = quad.points
    xp = quad.tangents
    xpp = quad.accelerations
    speed = quad.speed
    # 未归一化法向 (x₂', −x₁')
    n_raw = np.stack([xp[:, 1], -xp[:, 0]], axis=1)
    nu = quad.normals

    diff = x[:, None, :] - x[None, :, :]
    r = np.sqrt(np.sum(diff ** 2, axis=-1))
    np.fill_diagonal(r, 1.0)
    tt = quad.parameter[:, None] - quad.parameter[None, :]
    log_term = np.log(4.0 * np.sin(0.5 * tt) ** 2 + np.eye(m))
    idx = np.arange(m)

    variant = kernel.variant
    if kernel.laplace:
        if variant is LayerVariant.SINGLE:
            full = -np.log(r) / (2.0 * math.pi) * speed[None, :]
            l1 = np.broadcast_to(-speed[None, :] / (4.0 * math.pi), (m, m)).copy()
            l2 = full - l1 * log_term
            l2[idx, idx] = -np.log(speed) * speed / (2.0 * math.pi)
        else:
            l1 = np.zeros((m, m))
            if variant is LayerVariant.DOUBLE:
                l2 = np.sum(n_raw[None, :, :] * diff, axis=-1) / (2.0 * math.pi * r ** 2)
                l2[idx, idx] = np.sum(n_raw * xpp, axis=1) / (4.0 * math.pi * speed ** 2)
            else:
                l2 = -np.sum(nu[:, None, :] * diff, axis=-1) * speed[None, :] / (2.0 * math.pi * r ** 2)
                l2[idx, idx] = np.sum(nu * xpp, axis=1) / (4.0 * math.pi * speed)
    else:
        k = kernel.wavenumber
        h0, h1 = hankel1_01(k * r)
        j0 = bessel_j(0, k * r)
        j1 = bessel_j(1, k * r)
        if variant is LayerVariant.SINGLE:
            full = 0.25j * h0 * speed[None, :]
            l1 = -j0 * speed[None, :] / (4.0 * math.pi)
            l2 = full - l1 * log_term
            l1[idx, idx] = -speed / (4.0 * math.pi)
            l2[idx, idx] = (
                0.25j - EULER_GAMMA / (2.0 * math.pi) - np.log(k * speed / 2.0) / (2.0 * math.pi)
            ) * speed
        elif variant is LayerVariant.DOUBLE:
            proj = np.sum(n_raw[None, :, :] * diff, axis=-1) / r
            full = 0.25j * k * h1 * proj
            l1 = -k * j1 * proj / (4.0 * math.pi)
            l2 = full - l1 * log_term
            l1[idx, idx] = 0.0
            l2[idx, idx] = np.sum(n_raw * xpp, axis=1) / (4.0 * math.pi * speed ** 2)
        else:
            proj = -np.sum(nu[:, None, :] * diff, axis=-1) / r * speed[None, :]
            full = 0.25j * k * h1 * proj
            l1 = -k * j1 * proj / (4.0 * math.pi)
            l2 = full - l1 * log_term
            l1[idx, idx] = 0.0
            l2[idx, idx] = np.sum(nu * xpp, axis=1) / (4.0 * math.pi * speed)

    return log_quadrature_weights(m) * l1 + smooth_quadrature_weight(m) * l2


def assemble_block(
    kernel: LayerKernel,
    source: BoundaryQuadrature,
    target: BoundaryQuadrature,
    self_block: bool | None = None,
) -> np.ndarray:
    """(Mφ)_i ≈ 密度 φ 的层势在 target 第 i 个节点的值"""
    if self_block is None:
        self_block = source is target
    if self_block:
        if source is not target:
            raise DomainError("self_block requires source and target to be the same quadrature")
        return _self_block(kernel, source).astype(np.complex128)

    gap = source.min_distance_to(target)
    if gap < OVERLAP_DISTANCE:
        raise GeometryOverlap(
            f"boundaries are {gap:.3g} apart, below the overlap limit {OVERLAP_DISTANCE}"
        )
    values = kernel.values(target.points, source.points, source.normals, target.normals)
    return (values * source.weights[None, :]).astype(np.complex128)


def assemble_gradient_block(
    kernel: LayerKernel,
    source: BoundaryQuadrature,
    target: BoundaryQuadrature,
) -> np.ndarray:
    """目标曲线外法向方向导数 ∂_ν(x) 的矩阵，源与目标必须不同"""
    gap = source.min_distance_to(target)
    if gap < OVERLAP_DISTANCE:
        raise GeometryOverlap(
            f"boundaries are {gap:.3g} apart, below the overlap limit {OVERLAP_DISTANCE}"
        )
    grads = kernel.gradients(target.points, target.normals, source.points, source.normals)
    return grads * source.weights[None, :]


def _check_clearance(source: BoundaryQuadrature, points: np.ndarray) -> None:
    for start in range(0, len(points), _CHUNK):
        chunk = points[start:start + _CHUNK]
        diff = chunk[:, None, :] - source.points[None, :, :]
        d = np.sqrt(np.min(np.sum(diff ** 2, axis=-1), axis=1))
        bad = np.nonzero(d < NEAR_FIELD_DISTANCE)[0]
        if bad.size:
            i = int(bad[0])
            raise TooClose(
                f"evaluation point {chunk[i].tolist()} lies {d[i]:.3g} from the "
                f"{source.curve.kind} boundary (minimum {NEAR_FIELD_DISTANCE})"
            )


def _as_points(points) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    if p.ndim == 1:
        p = p[None, :]
    return p


def field_matrix(kernel: LayerKernel, source: BoundaryQuadrature, points) -> np.ndarray:
    """(P × m) 矩阵：密度 → 场点处的层势值"""
    if kernel.variant is LayerVariant.ADJOINT_DOUBLE:
        raise DomainError("adjoint double layer fields are directional derivatives; use evaluate_field_gradient")
    pts = _as_points(points)
    _check_clearance(source, pts)
    out = np.empty((len(pts), source.size), dtype=np.complex128)
    for start in range(0, len(pts), _CHUNK):
        sl = slice(start, start + _CHUNK)
        out[sl] = kernel.values(pts[sl], source.points, source.normals) * source.weights[None, :]
    return out


def field_gradient_matrix(kernel: LayerKernel, source: BoundaryQuadrature, points, directions) -> np.ndarray:
    """(P × m) 矩阵：密度 → 场点处沿 directions 的方向导数"""
    pts = _as_points(points)
    dirs = _as_points(directions)
    if dirs.shape != pts.shape:
        raise DomainError(f"directions shape {dirs.shape} does not match points {pts.shape}")
    _check_clearance(source, pts)
    out = np.empty((len(pts), source.size), dtype=np.complex128)
    for start in range(0, len(pts), _CHUNK):
        sl = slice(start, start + _CHUNK)
        out[sl] = kernel.gradients(pts[sl], dirs[sl], source.points, source.normals) * source.weights[None, :]
    return out


def evaluate_field(kernel: LayerKernel, source: BoundaryQuadrature, density, points) -> np.ndarray:
    """离开边界处的层势值（普通梯形规则）"""
    return field_matrix(kernel, source, points) @ np.asarray(density, dtype=np.complex128)


def evaluate_field_gradient(
    kernel: LayerKernel,
    source: BoundaryQuadrature,
    density,
    points,
    directions,
) -> np.ndarray:
    """层势沿给定方向的导数 d·∇u；adjoint_double 按 single 层势的梯度计算"""
    matrix = field_gradient_matrix(kernel, source, points, directions)
    return matrix @ np.asarray(density, dtype=np.complex128)
