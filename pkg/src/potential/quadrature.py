"""
对数奇异积分的三角求积权重

对 2n 个等距节点 t_j = jπ/n（或整体平移），
∫₀^{2π} ln(4 sin²((t_i − τ)/2)) f(τ) dτ ≈ Σ_j R_{|i−j|} f(t_j)，
R_d = −(2π/n) Σ_{m=1}^{n−1} cos(m d π/n)/m − (π/n²)(−1)^d。
权重只依赖下标差，整体是一个循环矩阵。
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
import scipy.linalg

from src.utils.errors import DomainError


@lru_cache(maxsize=16)
def _log_weights(m: int) -> np.ndarray:
    n = m // 2
    d = np.arange(m)
    orders = np.arange(1, n)
    series = np.cos(np.outer(d, orders) * math.pi / n) @ (1.0 / orders)
    first_column = -(2.0 * math.pi / n) * series - (math.pi / n ** 2) * np.where(d % 2 == 0, 1.0, -1.0)
    weights = scipy.linalg.circulant(first_column)
    weights.setflags(write=False)
    return weights


def log_quadrature_weights(m: int) -> np.ndarray:
    """m × m 权重矩阵 R；m 必须为偶数"""
    if m < 4 or m % 2 != 0:
        raise DomainError(f"log quadrature needs an even node count >= 4, got {m}")
    return _log_weights(m)


def smooth_quadrature_weight(m: int) -> float:
    """周期梯形规则的步长 2π/m"""
    return 2.0 * math.pi / m
