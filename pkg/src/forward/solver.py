"""
正问题边界积分求解器与 DtN 矩阵装配

表示：u = S_B φ_B + V_Γ φ_Γ
  - ∂B 上为单层势 S_B，Dirichlet 数据 u = f
  - 内部曲线 Γ：Dirichlet 用组合层势 V_Γ = K_Γ − iη S_Γ（η = max(|k|, 1)），
    其余（Neumann、阻抗、介质）用单层势 S_Γ
  - 介质圆盘的内部场由圆盘自身 Fourier 基下的内部 DtN 乘子表示：
    α_n ∂_ν u − β_n u = 0，(α_n, β_n) ∝ (1, k_in J'_n(k_in a)/J_n(k_in a))
∂_ν u|_{∂B} = (K'_B + ½) φ_B + ∂_ν V_Γ φ_Γ（∂B 内侧的跳跃关系）。

系统只分解一次，DtN 的各列、Green 函数的各个源点都复用同一个 LU。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.geometry.curves import Circle
from src.geometry.mesh import BoundaryQuadrature, sample_curve
from src.numerics.linalg import PIVOT_THRESHOLD, LUFactorization, max_norm
from src.numerics.specfun import log_derivative_j
from src.potential.layers import (
    LayerKernel,
    LayerVariant,
    assemble_block,
    assemble_gradient_block,
    field_gradient_matrix,
    field_matrix,
)
from src.utils.errors import DimensionMismatch, IllConditioned

from .boundary import BoundaryFunction, projection_matrix, reflection_index, synthesis_matrix
from .disk import EIGENVALUE_THRESHOLD, detect_disk_eigenvalue, disk_dtn_diagonal
from .scenario import (
    DirichletObstacle,
    ImpedanceObstacle,
    NeumannObstacle,
    PenetrableDisk,
    Resolution,
    Scenario,
    scenario_hash,
)

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e10


@dataclass(frozen=True, eq=False)
class DtnMatrix:
    """正交归一 Fourier 基下的 N×N DtN 矩阵"""
    entries: np.ndarray
    wavenumber: complex
    radius: float
    scenario_hash: str = ""

    @property
    def n_modes(self) -> int:
        return self.entries.shape[0]

    def apply(self, f: BoundaryFunction) -> BoundaryFunction:
        return f.apply(self.entries)

    def __sub__(self, other: "DtnMatrix") -> np.ndarray:
        if other.entries.shape != self.entries.shape:
            raise DimensionMismatch(
                f"DtN matrices differ in shape: {self.entries.shape} vs {other.entries.shape}"
            )
        return self.entries - other.entries

    def reciprocity_defect(self, matrix: np.ndarray | None = None) -> float:
        """max |M[m,n] − M[−n,−m]|（只比较两个下标都在带内的元素）"""
        return reciprocity_defect(self.entries if matrix is None else matrix)

    def conjugation_defect(self) -> float:
        """max |M[−m,−n] − conj(M[m,n])|；实 k 且实系数边界条件时为零"""
        m = self.entries
        ref = reflection_index(self.n_modes)
        ok = ref >= 0
        sub = m[np.ix_(ok, ok)]
        mirrored = m[np.ix_(ref[ok], ref[ok])]
        return float(np.max(np.abs(mirrored - np.conj(sub)))) if sub.size else 0.0


def reciprocity_defect(matrix: np.ndarray) -> float:
    n = matrix.shape[0]
    ref = reflection_index(n)
    ok = ref >= 0
    sub = matrix[np.ix_(ok, ok)]
    swapped = matrix[np.ix_(ref[ok], ref[ok])].T
    return float(np.max(np.abs(sub - swapped))) if sub.size else 0.0


class BoundarySolver:
    """一个场景的 Nyström 系统：装配、分解一次，之后可以反复求解"""

    def __init__(self, scenario: Scenario, resolution: Resolution | None = None, config: dict | None = None):
        config = config or {}
        num = config.get("numerics", {})
        self.condition_limit = float(num.get("condition_limit", CONDITION_LIMIT))
        self.pivot_threshold = float(num.get("pivot_threshold", PIVOT_THRESHOLD))

        self.scenario = scenario
        self.resolution = resolution or Resolution.from_config(config)
        self.k = scenario.wavenumber
        self.eta = max(abs(self.k), 1.0)

        self.outer = sample_curve(Circle((0.0, 0.0), scenario.outer_radius), self.resolution.outer_nodes)
        self.inner: BoundaryQuadrature | None = None
        if not scenario.is_empty:
            self.inner = sample_curve(
                scenario.obj.curve, self.resolution.inner_nodes, self.resolution.grading
            )

        self._single = LayerKernel(LayerVariant.SINGLE, self.k)
        self._double = LayerKernel(LayerVariant.DOUBLE, self.k)
        self._adjoint = LayerKernel(LayerVariant.ADJOINT_DOUBLE, self.k)

        self._assemble()
        self.lu = LUFactorization.factor(self.matrix, self.pivot_threshold)
        self.condition = self.lu.condition_estimate()
        logger.info(
            f"Factorized {self.scenario.obj.kind} system k={self.k:.6g} "
            f"size={self.size} cond~{self.condition:.3g}"
        )
        if self.condition > self.condition_limit:
            raise IllConditioned(
                self.condition,
                self.condition_limit,
                context=f"{self.scenario.obj.kind} scenario at k={self.k}",
            )

    # ── 装配 ────────────────────────────────────

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_outer(self) -> int:
        return self.outer.size

    def _inner_potential_on(self, target: BoundaryQuadrature) -> tuple[np.ndarray, np.ndarray]:
        """V_Γ 在另一条曲线上的 (值, 法向导数) 矩阵"""
        if isinstance(self.scenario.obj, DirichletObstacle):
            values = (
                assemble_block(self._double, self.inner, target)
                - 1j * self.eta * assemble_block(self._single, self.inner, target)
            )
            normals = (
                assemble_gradient_block(self._double, self.inner, target)
                - 1j * self.eta * assemble_gradient_block(self._single, self.inner, target)
            )
            return values, normals
        return (
            assemble_block(self._single, self.inner, target),
            assemble_gradient_block(self._single, self.inner, target),
        )

    def _medium_multipliers(self) -> tuple[np.ndarray, np.ndarray]:
        """Robin 形式的内部 DtN：返回 (P_α, P_β)，作用在 Γ 节点值上"""
        obj: PenetrableDisk = self.scenario.obj
        m = self.inner.size
        k_in = obj.interior_wavenumber(self.k)
        orders = np.arange(-m // 2, m // 2)
        lam = k_in * log_derivative_j(orders, k_in * obj.boundary.radius)
        # λ = ∞（J_n(k_in a) 的零点）退化为 Dirichlet 行：α = 0, β = 1
        pole = np.isinf(lam)
        lam = np.where(pole, 0.0, lam)
        scale = np.sqrt(1.0 + np.abs(lam) ** 2)
        alpha = np.where(pole, 0.0, 1.0 / scale)
        beta = np.where(pole, 1.0, lam / scale)
        e = np.exp(1j * np.outer(self.inner.parameter, orders))
        p_alpha = (e * alpha) @ e.conj().T / m
        p_beta = (e * beta) @ e.conj().T / m
        return p_alpha, p_beta

    def _assemble(self) -> None:
        outer = self.outer
        m_b = outer.size
        s_bb = assemble_block(self._single, outer, outer)
        kp_bb = assemble_block(self._adjoint, outer, outer)
        out_b = kp_bb + 0.5 * np.eye(m_b)

        if self.inner is None:
            self.matrix = s_bb
            self.output = out_b
            return

        inner = self.inner
        m_g = inner.size
        obj = self.scenario.obj
        eye_g = np.eye(m_g)

        v_gb, dv_gb = self._inner_potential_on(outer)
        s_bg = assemble_block(self._single, outer, inner)
        ds_bg = assemble_gradient_block(self._single, outer, inner)
        s_gg = assemble_block(self._single, inner, inner)

        if isinstance(obj, DirichletObstacle):
            k_gg = assemble_block(self._double, inner, inner)
            row_b = s_bg
            row_g = 0.5 * eye_g + k_gg - 1j * self.eta * s_gg
        else:
            kp_gg = assemble_block(self._adjoint, inner, inner)
            trace_b, trace_g = s_bg, s_gg
            normal_b, normal_g = ds_bg, kp_gg - 0.5 * eye_g
            row_b, row_g = self._apply_inner_condition(trace_b, normal_b, trace_g, normal_g)

        self.matrix = np.block([[s_bb, v_gb], [row_b, row_g]])
        self.output = np.hstack([out_b, dv_gb])

    def _apply_inner_condition(self, trace_b, normal_b, trace_g, normal_g):
        obj = self.scenario.obj
        if isinstance(obj, NeumannObstacle):
            return normal_b, normal_g
        if isinstance(obj, ImpedanceObstacle):
            return normal_b + obj.eta * trace_b, normal_g + obj.eta * trace_g
        if isinstance(obj, PenetrableDisk):
            p_alpha, p_beta = self._medium_multipliers()
            return p_alpha @ normal_b - p_beta @ trace_b, p_alpha @ normal_g - p_beta @ trace_g
        raise TypeError(f"unsupported interior object {obj.kind}")

    # ── 右端项与求解 ─────────────────────────────

    def inner_condition(self, values: np.ndarray, normal_derivatives: np.ndarray) -> np.ndarray:
        """把 Γ 上入射场的迹 (u, ∂_ν u) 变成 Γ 行的边界算子 𝔅u"""
        obj = self.scenario.obj
        if isinstance(obj, DirichletObstacle):
            return values
        if isinstance(obj, NeumannObstacle):
            return normal_derivatives
        if isinstance(obj, ImpedanceObstacle):
            return normal_derivatives + obj.eta * values
        p_alpha, p_beta = self._medium_multipliers()
        return p_alpha @ normal_derivatives - p_beta @ values

    def solve(self, outer_values: np.ndarray, inner_values: np.ndarray | None = None) -> np.ndarray:
        """∂B 上 u 的值与 Γ 行数据 → 密度（可多列）"""
        outer_values = np.asarray(outer_values, dtype=np.complex128)
        squeeze = outer_values.ndim == 1
        ob = outer_values.reshape(self.n_outer, -1)
        if self.inner is None:
            rhs = ob
        else:
            if inner_values is None:
                ib = np.zeros((self.inner.size, ob.shape[1]), dtype=np.complex128)
            else:
                ib = np.asarray(inner_values, dtype=np.complex128).reshape(self.inner.size, -1)
            rhs = np.vstack([ob, ib])
        dens = self.lu.solve(rhs)
        return dens[:, 0] if squeeze else dens

    def normal_derivative(self, densities: np.ndarray) -> np.ndarray:
        """∂B 节点上的 ∂_ν u"""
        return self.output @ densities

    def field(self, densities: np.ndarray, points) -> np.ndarray:
        """区域内部点处的 u（点须离两条边界至少 1e−3）"""
        dens = np.asarray(densities, dtype=np.complex128)
        squeeze = dens.ndim == 1
        dens = dens.reshape(self.size, -1)
        m_b = self.n_outer
        values = field_matrix(self._single, self.outer, points) @ dens[:m_b]
        if self.inner is not None:
            if isinstance(self.scenario.obj, DirichletObstacle):
                inner = (
                    field_matrix(self._double, self.inner, points)
                    - 1j * self.eta * field_matrix(self._single, self.inner, points)
                )
            else:
                inner = field_matrix(self._single, self.inner, points)
            values = values + inner @ dens[m_b:]
        return values[:, 0] if squeeze else values

    def field_gradient(self, densities: np.ndarray, points, directions) -> np.ndarray:
        dens = np.asarray(densities, dtype=np.complex128).reshape(self.size, -1)
        m_b = self.n_outer
        values = field_gradient_matrix(self._single, self.outer, points, directions) @ dens[:m_b]
        if self.inner is not None:
            if isinstance(self.scenario.obj, DirichletObstacle):
                inner = (
                    field_gradient_matrix(self._double, self.inner, points, directions)
                    - 1j * self.eta * field_gradient_matrix(self._single, self.inner, points, directions)
                )
            else:
                inner = field_gradient_matrix(self._single, self.inner, points, directions)
            values = values + inner @ dens[m_b:]
        return values

    # ── Fourier 空间 ────────────────────────────

    def neumann_coefficients(self, coefficients: np.ndarray) -> np.ndarray:
        """Dirichlet 系数（N × K）→ ∂_ν u 系数（N × K）"""
        c = np.asarray(coefficients, dtype=np.complex128)
        n_modes = c.shape[0]
        if n_modes > self.n_outer:
            raise DimensionMismatch(f"{n_modes} modes exceed {self.n_outer} outer nodes")
        synth = synthesis_matrix(n_modes, self.scenario.outer_radius, self.outer.parameter)
        dens = self.solve(synth @ c.reshape(n_modes, -1))
        proj = projection_matrix(n_modes, self.scenario.outer_radius, self.n_outer)
        return proj @ self.normal_derivative(dens)

    def neumann_trace(self, f: BoundaryFunction) -> BoundaryFunction:
        return BoundaryFunction(self.neumann_coefficients(f.coefficients)[:, 0], f.radius)

    def dtn(self, n_modes: int) -> DtnMatrix:
        entries = self.neumann_coefficients(np.eye(n_modes, dtype=np.complex128))
        return DtnMatrix(
            entries=entries,
            wavenumber=self.k,
            radius=self.scenario.outer_radius,
            scenario_hash=scenario_hash(self.scenario, self.resolution),
        )


def solve_forward(
    scenario: Scenario,
    f: BoundaryFunction,
    resolution: Resolution | None = None,
    config: dict | None = None,
) -> BoundaryFunction:
    """返回 ∂_ν u|_{∂B}"""
    if f.radius != scenario.outer_radius:
        raise DimensionMismatch(f"boundary data lives on R={f.radius}, scenario has R={scenario.outer_radius}")
    return BoundarySolver(scenario, resolution, config).neumann_trace(f)


def assemble_dtn(
    scenario: Scenario,
    n_modes: int,
    resolution: Resolution | None = None,
    config: dict | None = None,
) -> DtnMatrix:
    """第 n 列 = solve_forward(scenario, e_n)，共用一次 LU"""
    dtn = BoundarySolver(scenario, resolution, config).dtn(n_modes)
    logger.debug(
        f"Assembled {n_modes}x{n_modes} DtN for {scenario.obj.kind}, "
        f"max entry {max_norm(dtn.entries):.4g}"
    )
    return dtn


def dtn_empty_disk(
    k: complex,
    radius: float,
    n_modes: int,
    threshold: float = EIGENVALUE_THRESHOLD,
) -> DtnMatrix:
    """A₀(k²)：对角元 k J'_n(kR)/J_n(kR)"""
    detect_disk_eigenvalue(k, radius, n_modes, threshold).raise_if_flagged()
    entries = np.diag(disk_dtn_diagonal(k, radius, n_modes))
    return DtnMatrix(
        entries=entries,
        wavenumber=complex(k),
        radius=float(radius),
        scenario_hash=scenario_hash(Scenario(radius, k)),
    )