"""
圆盘上的闭式结果：特征值检测、空圆盘 DtN 对角元
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.numerics.specfun import disk_eigenvalue_proximity, log_derivative_j
from src.utils.errors import NearDiskEigenvalue

from .boundary import mode_orders

logger = logging.getLogger(__name__)

EIGENVALUE_THRESHOLD = 1e-3


@dataclass(frozen=True)
class DiskEigenvalueReport:
    wavenumber: complex
    radius: float
    order: int                 # 最接近 Dirichlet 特征值的阶数 |n|
    proximity: float           # |J_n| / sqrt(J_n² + J_n'²)
    threshold: float

    @property
    def flagged(self) -> bool:
        return self.proximity < self.threshold

    def raise_if_flagged(self) -> None:
        if self.flagged:
            raise NearDiskEigenvalue(self.order, self.proximity, self.wavenumber, self.radius)


def detect_disk_eigenvalue(
    k: complex,
    radius: float,
    n_modes: int,
    threshold: float = EIGENVALUE_THRESHOLD,
) -> DiskEigenvalueReport:
    """检查 |n| ≤ N/2 的各阶 J_n(kR) 是否接近零点"""
    orders = np.arange(0, n_modes // 2 + 1)
    proximity = disk_eigenvalue_proximity(orders, complex(k) * radius)
    i = int(np.argmin(proximity))
    report = DiskEigenvalueReport(
        wavenumber=complex(k),
        radius=float(radius),
        order=int(orders[i]),
        proximity=float(proximity[i]),
        threshold=threshold,
    )
    if report.flagged:
        logger.warning(
            f"k={k} R={radius}: order {report.order} is near a disk Dirichlet eigenvalue "
            f"(proximity {report.proximity:.3g})"
        )
    return report


def disk_dtn_diagonal(k: complex, radius: float, n_modes: int) -> np.ndarray:
    """A₀ 的对角元 k·J'_n(kR)/J_n(kR)，n = −N/2 … N/2−1"""
    k = complex(k)
    return k * log_derivative_j(mode_orders(n_modes), k * radius)
