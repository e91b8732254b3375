"""
Bessel / Hankel 函数

为基本解 Φ_k、圆盘 DtN 谱和级数 Green 函数提供特殊函数。
高阶只在实参数下使用（级数、DtN 谱），复参数只需 0、1 阶（核函数）。
数值本身由 scipy.special (AMOS) 计算，这里负责定义域检查和稳定的比值计算。
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from src.utils.errors import DomainError

MAX_ORDER = 256
MAX_HANKEL_ARGUMENT = 200.0
MIN_HANKEL_ARGUMENT = 1e-12

# |J_n| 低于此值时改用渐近比值，避免 0/0
_RATIO_UNDERFLOW = 1e-250


@dataclass(frozen=True)
class BesselPair:
    """J_n, Y_n 及其导数在同一实参数处的值"""
    order: int
    x: float
    j: float
    y: float
    jp: float
    yp: float

    @property
    def wronskian_residual(self) -> float:
        return abs(self.j * self.yp - self.jp * self.y - 2.0 / (math.pi * self.x))


def bessel_jy(n: int, x: float) -> BesselPair:
    """J_n(x), Y_n(x), J'_n(x), Y'_n(x)，n ≥ 0，x > 0"""
    if n < 0 or n > MAX_ORDER or int(n) != n:
        raise DomainError(f"order must be an integer in [0, {MAX_ORDER}], got {n}")
    if not x > 0.0:
        raise DomainError(f"bessel_jy needs x > 0, got {x}")
    n = int(n)
    return BesselPair(
        order=n,
        x=float(x),
        j=float(special.jv(n, x)),
        y=float(special.yv(n, x)),
        jp=float(special.jvp(n, x)),
        yp=float(special.yvp(n, x)),
    )


def hankel1_orders01(z: complex) -> tuple[complex, complex]:
    """(H_0^{(1)}(z), H_1^{(1)}(z))，要求 Im z ≥ 0"""
    z = complex(z)
    if z == 0:
        raise DomainError("hankel1_orders01 is singular at z = 0")
    if z.imag < 0:
        raise DomainError(f"hankel1_orders01 needs Im z >= 0, got {z}")
    if not MIN_HANKEL_ARGUMENT < abs(z) <= MAX_HANKEL_ARGUMENT:
        raise DomainError(
            f"|z| must lie in ({MIN_HANKEL_ARGUMENT}, {MAX_HANKEL_ARGUMENT}], got {abs(z)}"
        )
    return complex(special.hankel1(0, z)), complex(special.hankel1(1, z))


# ─────────────────────────────────────────────
# 向量化版本（核函数装配内部使用，不做逐点检查）
# ─────────────────────────────────────────────

def hankel1_01(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    z = np.asarray(z, dtype=np.complex128)
    return special.hankel1(0, z), special.hankel1(1, z)


def bessel_j(order, z) -> np.ndarray:
    return special.jv(order, z)


def bessel_jp(order, z) -> np.ndarray:
    return special.jvp(order, z)


def bessel_h1(order, z) -> np.ndarray:
    return special.hankel1(order, z)


def bessel_h1p(order, z) -> np.ndarray:
    return special.h1vp(order, z)


def log_derivative_j(orders: np.ndarray, z: complex) -> np.ndarray:
    """J'_n(z)/J_n(z)，阶数取绝对值（J_{-n} 与 J_n 的对数导数相同）

    J_n(z) 恰为零（或非有限）且 n ≤ |z| 时返回复无穷：这是 J_n 的零点，不是下溢。
    """
    orders = np.abs(np.asarray(orders, dtype=float))
    z = complex(z)
    jn = special.jv(orders, z)
    jnp = special.jvp(orders, z)

    ratio = np.empty(orders.shape, dtype=np.complex128)
    tiny = ~np.isfinite(jn) | (np.abs(jn) < _RATIO_UNDERFLOW)
    ok = ~tiny
    ratio[ok] = jnp[ok] / jn[ok]
    # J'_n/J_n = n/z − J_{n+1}/J_n，且 J_{n+1}/J_n ≈ z / (2(n+1)) 当 n ≫ |z|
    underflow = tiny & (orders > abs(z))
    nt = orders[underflow]
    ratio[underflow] = nt / z - z / (2.0 * (nt + 1.0))
    ratio[tiny & ~underflow] = complex(np.inf, 0.0)
    return ratio


def disk_eigenvalue_proximity(orders: np.ndarray, x: complex) -> np.ndarray:
    """J_n(x) 相对其包络的大小，∈ [0, 1]，在 J_n 的零点处为 0

    ρ = J'/J 按该阶的自然尺度 max(1, n/|x|) 归一化后取 1/sqrt(1 + |ρ|²)。
    n > |x| 时 J_n 没有实零点，归一化后的值保持 O(1)，小 kR 的高阶不会误报。
    """
    orders = np.abs(np.asarray(orders, dtype=float))
    ratio = log_derivative_j(orders, x)
    scale = np.maximum(1.0, orders / max(abs(complex(x)), MIN_HANKEL_ARGUMENT))
    with np.errstate(invalid="ignore"):
        scaled = np.abs(ratio) / scale
    return 1.0 / np.sqrt(1.0 + scaled ** 2)
