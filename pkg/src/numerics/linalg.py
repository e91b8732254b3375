"""
稠密复矩阵线性代数

  - LU 分解求解（部分选主元，支持多右端项，分解可复用）
  - Hermitian 特征分解（特征值降序）
  - 范数工具

所有函数都是输入的纯函数；底层全部交给 scipy.linalg / LAPACK。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from src.utils.errors import DimensionMismatch, NotHermitian, SingularMatrix

logger = logging.getLogger(__name__)

PIVOT_THRESHOLD = 1e-13
HERMITIAN_TOLERANCE = 1e-10


def max_norm(a: np.ndarray) -> float:
    """‖A‖_max：绝对值最大的元素"""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def as_complex_matrix(a) -> np.ndarray:
    """转换为二维 complex128 数组并检查有限性"""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got array with shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return m


@dataclass(frozen=True)
class LUFactorization:
    """一次分解、多次求解"""
    lu: np.ndarray
    piv: np.ndarray
    norm_one: float

    @property
    def size(self) -> int:
        return self.lu.shape[0]

    @classmethod
    def factor(cls, a, pivot_threshold: float = PIVOT_THRESHOLD) -> "LUFactorization":
        m = as_complex_matrix(a)
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"LU needs a square matrix, got {m.shape}")
        lu, piv = scipy.linalg.lu_factor(m, check_finite=False)

        threshold = pivot_threshold * max_norm(m)
        pivots = np.abs(np.diag(lu))
        small = np.nonzero(pivots < threshold)[0]
        if small.size:
            idx = int(small[0])
            raise SingularMatrix(idx, float(pivots[idx]), threshold)

        return cls(lu=lu, piv=piv, norm_one=float(np.linalg.norm(m, 1)))

    def solve(self, b) -> np.ndarray:
        rhs = np.asarray(b, dtype=np.complex128)
        if rhs.shape[0] != self.size:
            raise DimensionMismatch(
                f"right-hand side has {rhs.shape[0]} rows, matrix has {self.size}"
            )
        return scipy.linalg.lu_solve((self.lu, self.piv), rhs, check_finite=False)

    def condition_estimate(self) -> float:
        """LAPACK gecon 估计的 1-范数条件数"""
        gecon, = lapack.get_lapack_funcs(("gecon",), (self.lu,))
        rcond, info = gecon(self.lu, self.norm_one, norm="1")
        if info != 0 or rcond <= 0.0:
            return float("inf")
        return float(1.0 / rcond)


def lu_solve(a, b, pivot_threshold: float = PIVOT_THRESHOLD) -> np.ndarray:
    """求解 AX = B；B 可以有多列"""
    b_arr = np.asarray(b, dtype=np.complex128)
    factorization = LUFactorization.factor(a, pivot_threshold)
    return factorization.solve(b_arr)


@dataclass(frozen=True)
class HermitianEigensystem:
    """特征值降序排列，特征向量按列存放"""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eig(a, tolerance: float = HERMITIAN_TOLERANCE) -> HermitianEigensystem:
    """Hermitian 矩阵的完整特征分解；调用方负责先对称化"""
    m = as_complex_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"eigendecomposition needs a square matrix, got {m.shape}")

    scale = max_norm(m)
    deviation = max_norm(m - m.conj().T)
    if deviation > tolerance * scale:
        raise NotHermitian(deviation, tolerance * scale)

    eigenvalues, eigenvectors = scipy.linalg.eigh(m, check_finite=False)
    order = np.arange(len(eigenvalues))[::-1]
    return HermitianEigensystem(
        eigenvalues=np.ascontiguousarray(eigenvalues[order]),
        eigenvectors=np.ascontiguousarray(eigenvectors[:, order]),
    )
