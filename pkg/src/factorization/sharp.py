"""
F_# = |Re F| + |Im F| 与 Picard 级数

Re F = (F + F*)/2，Im F = (F − F*)/(2i)，分别做 Hermitian 特征分解，
特征值取绝对值后相加，再整体对角化一次。截断：λ_n < ε_rel·λ_1 的项不参与级数。
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.forward.boundary import BoundaryFunction
from src.numerics.linalg import HermitianEigensystem, as_complex_matrix, hermitian_eig
from src.utils.errors import DimensionMismatch

logger = logging.getLogger(__name__)

RELATIVE_CUTOFF = 1e-8
# 负特征值在 −1e−10·λ₁ 以内视为舍入误差
_PSD_SLACK = 1e-10


@dataclass(frozen=True)
class SharpEigensystem:
    eigensystem: HermitianEigensystem
    cutoff_index: int
    relative_cutoff: float = RELATIVE_CUTOFF

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eigensystem.eigenvalues

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.eigensystem.eigenvectors

    @property
    def size(self) -> int:
        return self.eigensystem.size

    @property
    def leading(self) -> float:
        return float(self.eigenvalues[0]) if self.size else 0.0

    def matrix(self) -> np.ndarray:
        return self.eigensystem.reconstruct()

    def with_cutoff(self, cutoff_index: int) -> "SharpEigensystem":
        return SharpEigensystem(self.eigensystem, max(0, min(cutoff_index, self.size)), self.relative_cutoff)


def _absolute(part: np.ndarray) -> np.ndarray:
    eig = hermitian_eig(part)
    v = eig.eigenvectors
    return (v * np.abs(eig.eigenvalues)) @ v.conj().T


def sharp(f, relative_cutoff: float = RELATIVE_CUTOFF) -> SharpEigensystem:
    m = as_complex_matrix(f)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"sharp operator needs a square matrix, got {m.shape}")

    adj = m.conj().T
    re_part = (m + adj) / 2.0
    im_part = (m - adj) / 2.0j
    combined = _absolute(re_part) + _absolute(im_part)
    combined = (combined + combined.conj().T) / 2.0

    eig = hermitian_eig(combined)
    values = eig.eigenvalues.copy()
    lead = values[0] if values.size else 0.0
    if lead > 0:
        too_negative = values < -_PSD_SLACK * lead
        if np.any(too_negative):
            logger.warning(
                f"sharp operator has eigenvalue {values.min():.3e} below roundoff of lambda_1={lead:.3e}"
            )
    values = np.maximum(values, 0.0)
    eig = HermitianEigensystem(eigenvalues=values, eigenvectors=eig.eigenvectors)

    if lead > 0:
        below = np.nonzero(values < relative_cutoff * lead)[0]
        cutoff = int(below[0]) if below.size else len(values)
    else:
        cutoff = 0
    logger.debug(f"sharp: lambda_1={lead:.4e}, cutoff index {cutoff} of {len(values)}")
    return SharpEigensystem(eigensystem=eig, cutoff_index=cutoff, relative_cutoff=relative_cutoff)


def picard_many(series: SharpEigensystem, g: np.ndarray) -> np.ndarray:
    """每一列 g_j 的 [Σ_{n<cutoff} |(g_j, φ_n)|²/λ_n]^{-1}"""
    g = np.asarray(g, dtype=np.complex128)
    if g.ndim == 1:
        g = g[:, None]
    if g.shape[0] != series.size:
        raise DimensionMismatch(f"data has {g.shape[0]} modes, eigensystem has {series.size}")

    n = series.cutoff_index
    phi = series.eigenvectors[:, :n]
    lam = series.eigenvalues[:n]
    coeffs = phi.conj().T @ g
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        total = np.sum(np.abs(coeffs) ** 2 / lam[:, None], axis=0)

    out = np.empty(total.shape, dtype=float)
    zero = total == 0.0
    overflow = ~np.isfinite(total)
    normal = ~(zero | overflow)
    out[zero] = math.inf
    out[overflow] = 0.0
    out[normal] = 1.0 / total[normal]
    return out


def picard(series: SharpEigensystem, g: BoundaryFunction | np.ndarray) -> float:
    coeffs = g.coefficients if isinstance(g, BoundaryFunction) else np.asarray(g)
    return float(picard_many(series, coeffs)[0])
