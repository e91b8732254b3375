"""
测量圆 ∂B 上的边界函数

系数按 n = −N/2, …, N/2−1 排列，基函数为正交归一的 e_n(θ) = e^{inθ}/√(2πR)，
所以 L²(∂B) 内积就是系数向量的 Hermitian 内积，算子的伴随就是共轭转置。
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.utils.errors import DimensionMismatch, DomainError


def mode_orders(n_modes: int) -> np.ndarray:
    if n_modes < 2 or n_modes % 2 != 0:
        raise DomainError(f"mode count must be even and >= 2, got {n_modes}")
    return np.arange(-n_modes // 2, n_modes // 2)


def reflection_index(n_modes: int) -> np.ndarray:
    """下标 i → 阶数 −n 对应的下标；n = −N/2 没有对应项，记为 −1"""
    idx = n_modes - np.arange(n_modes)
    idx[0] = -1
    return idx


def synthesis_matrix(n_modes: int, radius: float, theta: np.ndarray) -> np.ndarray:
    """E[j, n] = e_n(θ_j)：系数 → 节点值"""
    return np.exp(1j * np.outer(theta, mode_orders(n_modes))) / math.sqrt(2.0 * math.pi * radius)


def projection_matrix(n_modes: int, radius: float, m: int) -> np.ndarray:
    """P[n, j]：等距节点值 → 系数（梯形规则，对带限数据精确）"""
    theta = 2.0 * math.pi * np.arange(m) / m
    return (
        math.sqrt(2.0 * math.pi * radius) / m
        * np.exp(-1j * np.outer(mode_orders(n_modes), theta))
    )


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    coefficients: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128).reshape(-1)
        mode_orders(len(c))
        if not self.radius > 0:
            raise DomainError(f"radius must be positive, got {self.radius}")
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "radius", float(self.radius))

    # ── 构造 ────────────────────────────────────

    @classmethod
    def zeros(cls, n_modes: int, radius: float) -> "BoundaryFunction":
        return cls(np.zeros(n_modes, dtype=np.complex128), radius)

    @classmethod
    def basis(cls, order: int, n_modes: int, radius: float) -> "BoundaryFunction":
        """正交归一基函数 e_n"""
        orders = mode_orders(n_modes)
        hits = np.nonzero(orders == order)[0]
        if hits.size == 0:
            raise DomainError(f"order {order} is outside the band of {n_modes} modes")
        c = np.zeros(n_modes, dtype=np.complex128)
        c[hits[0]] = 1.0
        return cls(c, radius)

    @classmethod
    def from_samples(cls, values, n_modes: int, radius: float) -> "BoundaryFunction":
        """等距节点 θ_j = 2πj/m 上的值投影到前 N 个模态"""
        v = np.asarray(values, dtype=np.complex128).reshape(-1)
        m = len(v)
        if m < n_modes:
            raise DimensionMismatch(f"{m} samples cannot resolve {n_modes} modes")
        spectrum = np.fft.fft(v)
        c = spectrum[np.mod(mode_orders(n_modes), m)] * math.sqrt(2.0 * math.pi * radius) / m
        return cls(c, radius)

    @classmethod
    def from_raw(cls, raw, radius: float) -> "BoundaryFunction":
        """原始 Fourier 系数 f = Σ c_n e^{inθ}"""
        return cls(np.asarray(raw, dtype=np.complex128) * math.sqrt(2.0 * math.pi * radius), radius)

    # ── 属性 ────────────────────────────────────

    @property
    def n_modes(self) -> int:
        return len(self.coefficients)

    @property
    def orders(self) -> np.ndarray:
        return mode_orders(self.n_modes)

    @property
    def raw_coefficients(self) -> np.ndarray:
        return self.coefficients / math.sqrt(2.0 * math.pi * self.radius)

    def evaluate(self, theta) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        return synthesis_matrix(self.n_modes, self.radius, theta) @ self.coefficients

    def samples(self, m: int) -> np.ndarray:
        return self.evaluate(2.0 * math.pi * np.arange(m) / m)

    # ── 代数 ────────────────────────────────────

    def _check_compatible(self, other: "BoundaryFunction") -> None:
        if other.n_modes != self.n_modes or other.radius != self.radius:
            raise DimensionMismatch(
                f"boundary functions differ: {self.n_modes} modes on R={self.radius} "
                f"vs {other.n_modes} modes on R={other.radius}"
            )

    def inner(self, other: "BoundaryFunction") -> complex:
        """(g, h) = Σ ĝ_n conj(ĥ_n)"""
        self._check_compatible(other)
        return complex(np.vdot(other.coefficients, self.coefficients))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def __add__(self, other: "BoundaryFunction") -> "BoundaryFunction":
        self._check_compatible(other)
        return BoundaryFunction(self.coefficients + other.coefficients, self.radius)

    def __sub__(self, other: "BoundaryFunction") -> "BoundaryFunction":
        self._check_compatible(other)
        return BoundaryFunction(self.coefficients - other.coefficients, self.radius)

    def __mul__(self, scalar) -> "BoundaryFunction":
        return BoundaryFunction(self.coefficients * complex(scalar), self.radius)

    __rmul__ = __mul__

    def apply(self, matrix) -> "BoundaryFunction":
        """作用一个 N×N 的系数空间算子"""
        m = np.asarray(matrix)
        if m.shape != (self.n_modes, self.n_modes):
            raise DimensionMismatch(f"operator shape {m.shape} does not match {self.n_modes} modes")
        return BoundaryFunction(m @ self.coefficients, self.radius)

    def resized(self, n_modes: int) -> "BoundaryFunction":
        """截断或补零到 n_modes 个模态"""
        new_orders = mode_orders(n_modes)
        out = np.zeros(n_modes, dtype=np.complex128)
        lookup = {int(o): i for i, o in enumerate(self.orders)}
        for j, o in enumerate(new_orders):
            i = lookup.get(int(o))
            if i is not None:
                out[j] = self.coefficients[i]
        return BoundaryFunction(out, self.radius)

    def to_dict(self, prefix: str) -> dict:
        return {
            f"{prefix}_re": [float(v) for v in self.coefficients.real],
            f"{prefix}_im": [float(v) for v in self.coefficients.imag],
        }


def from_knot_values(values, n_modes: int, radius: float) -> BoundaryFunction:
    """等长弧段上的分段常数函数：闭式弧积分得到精确 Fourier 系数"""
    v = np.asarray(values, dtype=float).reshape(-1)
    if v.size < 1:
        raise DomainError("knot values must not be empty")
    arcs = len(v)
    a = 2.0 * math.pi * np.arange(arcs) / arcs
    b = a + 2.0 * math.pi / arcs

    orders = mode_orders(n_modes)
    raw = np.empty(n_modes, dtype=np.complex128)
    nz = orders != 0
    n = orders[nz].astype(float)
    integrals = (np.exp(-1j * np.outer(n, a)) - np.exp(-1j * np.outer(n, b))) / (1j * n[:, None])
    raw[nz] = integrals @ v / (2.0 * math.pi)
    raw[~nz] = float(np.mean(v))
    return BoundaryFunction.from_raw(raw, radius)
