"""
系数扫描与测试区域扫描

两种扫描共用同一套流程：
  测试区域 Ω/℧ 的 DtN − 参考 DtN → sharp 分解 → 对数据函数 p 做 Picard 求值

  classical：参考为空圆盘 A₀(κ²)，参考迹 ∂_ν u₀ = A₀(κ²) f
  tilde    ：参考为 A(κ², Ω̃)，参考迹 ∂_ν ũ₀ = A(κ², B̂) f，B̂ 默认取 Ω̃

单个 κ 或单个区域失败时只屏蔽对应的行/成员，扫描继续。
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from src.forward.scenario import ImpedanceObstacle, InteriorObject, PenetrableDisk, Resolution, Scenario
from src.forward.solver import DtnMatrix, assemble_dtn
from src.forward.synthesis import (
    CauchyData,
    EmptyDiskReference,
    ImpedanceHatReference,
    MediumHatReference,
    ReferenceKind,
)
from src.geometry.curves import Circle
from src.utils.errors import DomainError, NoAcceptedDomains, NumericalError

from .indicators import DEGENERACY_TOLERANCE, DataOperator, IndicatorResult, SamplingGrid
from .sharp import RELATIVE_CUTOFF, picard_many, sharp

logger = logging.getLogger(__name__)

OUTER_MEDIUM_INDEX = (2 + 1j) ** 2
INNER_MEDIUM_INDEX = (2 - 1j) ** 2
HULL_QUANTILE = 0.5


class ScanVariant(str, Enum):
    CLASSICAL = "classical"
    TILDE = "tilde"


# ─────────────────────────────────────────────
# 测试区域
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class TestDomain:
    """
    一个测试区域 Ω（阻抗障碍物）或 ℧（介质圆盘），附带人工内部对象 Ω̃/℧̃。

    阻抗：∂Ω 上 η = +i|κ|，∂Ω̃ 上 η = −i|κ|
    介质：℧ 内波数 |κ|(2+i)，℧̃ 内 |κ|(2−i)，即折射率 (2±i)²
    """
    __test__ = False

    outer: Circle
    inner: Circle | None = None
    kind: str = "impedance"
    outer_index: complex = OUTER_MEDIUM_INDEX
    inner_index: complex = INNER_MEDIUM_INDEX
    hat: Circle | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("impedance", "medium"):
            raise DomainError(f"test domain kind must be 'impedance' or 'medium', got {self.kind!r}")
        for disk in (self.inner, self.hat):
            if disk is None:
                continue
            gap = self.outer.radius - (math.dist(disk.center, self.outer.center) + disk.radius)
            if gap <= 0:
                raise DomainError(
                    f"artificial disk at {list(disk.center)} (r={disk.radius}) "
                    f"is not inside the test domain (r={self.outer.radius})"
                )

    @property
    def hat_disk(self) -> Circle | None:
        return self.hat if self.hat is not None else self.inner

    def _object(self, disk: Circle, kappa: float, outer: bool) -> InteriorObject:
        if self.kind == "impedance":
            eta = 1j * abs(kappa) if outer else -1j * abs(kappa)
            return ImpedanceObstacle(disk, eta)
        return PenetrableDisk(disk, self.outer_index if outer else self.inner_index)

    def outer_object(self, kappa: float) -> InteriorObject:
        return self._object(self.outer, kappa, outer=True)

    def inner_object(self, kappa: float) -> InteriorObject:
        if self.inner is None:
            raise DomainError(f"test domain {self.label or self.outer.to_dict()} has no artificial inner disk")
        return self._object(self.inner, kappa, outer=False)

    def reference(self, kappa: float, variant: ScanVariant) -> ReferenceKind:
        """参考迹的来源：classical 为空圆盘，tilde 为 B̂ 上与 Ω̃ 相同的条件"""
        if ScanVariant(variant) is ScanVariant.CLASSICAL:
            return EmptyDiskReference(kappa)
        disk = self.hat_disk
        if disk is None:
            raise DomainError("the tilde variant needs an artificial inner disk")
        if self.kind == "impedance":
            return ImpedanceHatReference(kappa, disk, -1j * abs(kappa))
        return MediumHatReference(kappa, disk, self.inner_index)

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "label": self.label,
            "outer": self.outer.to_dict(),
            "inner": self.inner.to_dict() if self.inner is not None else None,
            "hat": self.hat.to_dict() if self.hat is not None else None,
        }
        if self.kind == "medium":
            out["outer_index"] = [complex(self.outer_index).real, complex(self.outer_index).imag]
            out["inner_index"] = [complex(self.inner_index).real, complex(self.inner_index).imag]
        else:
            out["eta"] = "outer +i|k|, inner -i|k|"
        return out


def radial_family(
    center: Sequence[float] = (0.0, 0.0),
    ells: Iterable[int] = range(5, 31),
    kind: str = "impedance",
) -> list[TestDomain]:
    """以 P 为圆心的同心族：Ω^(ℓ) 半径 ℓ/10，Ω̃^(ℓ) 半径 ℓ/20"""
    c = (float(center[0]), float(center[1]))
    return [
        TestDomain(
            outer=Circle(c, ell / 10.0),
            inner=Circle(c, ell / 20.0),
            kind=kind,
            label=f"l={ell}",
        )
        for ell in ells
    ]


def disk_grid_family(r: float, kind: str = "impedance") -> list[TestDomain]:
    """半径 r 的圆盘网格，圆心 P_j = (2r·j₁ − 2, 2r·j₂ − 2)，j ∈ {0..2/r}²"""
    if r <= 0:
        raise DomainError(f"grid disk radius must be positive, got {r}")
    count = int(round(2.0 / r))
    family = []
    for j2 in range(count + 1):
        for j1 in range(count + 1):
            c = (2.0 * r * j1 - 2.0, 2.0 * r * j2 - 2.0)
            family.append(
                TestDomain(outer=Circle(c, r), inner=Circle(c, r / 2.0), kind=kind, label=f"j=({j1},{j2})")
            )
    return family


# ─────────────────────────────────────────────
# 扫描
# ─────────────────────────────────────────────

def _factorization_settings(config: dict | None) -> tuple[float, float]:
    fact = (config or {}).get("factorization", {})
    return (
        float(fact.get("cutoff", RELATIVE_CUTOFF)),
        float(fact.get("degeneracy_tolerance", DEGENERACY_TOLERANCE)),
    )


def _reference_operator(
    domain: TestDomain,
    kappa: float,
    variant: ScanVariant,
    radius: float,
    n_modes: int,
    resolution: Resolution | None,
    config: dict | None,
) -> DtnMatrix:
    if variant is ScanVariant.CLASSICAL:
        return EmptyDiskReference(kappa).dtn(radius, n_modes, resolution, config)
    scenario = Scenario(radius, kappa, domain.inner_object(kappa))
    return assemble_dtn(scenario, n_modes, resolution, config)


def _reference_trace(
    domain: TestDomain,
    kappa: float,
    variant: ScanVariant,
    reference: DtnMatrix,
    measured: CauchyData,
    resolution: Resolution | None,
    config: dict | None,
) -> np.ndarray:
    """B̂ 与 Ω̃ 相同时直接复用参考算子"""
    if variant is ScanVariant.CLASSICAL or domain.hat is None:
        return reference.apply(measured.f).coefficients
    kind = domain.reference(kappa, variant)
    return kind.dtn(measured.radius, measured.n_modes, resolution, config).apply(measured.f).coefficients


def coefficient_scan(
    measured: CauchyData,
    test_domain: TestDomain,
    tau_grid: Sequence[float],
    kappa_grid: Sequence[float],
    variant: ScanVariant | str = ScanVariant.TILDE,
    resolution: Resolution | None = None,
    config: dict | None = None,
) -> IndicatorResult:
    """
    I₁(τ, κ)：行对应 κ，列对应 τ。

    每个 κ 装配一次 A(κ², Ω) 与参考算子、一次 sharp 分解，
    然后 p = g − τ·∂_ν u₀ 对整行 τ 一次性做 Picard 求值。
    """
    variant = ScanVariant(variant)
    cutoff, tolerance = _factorization_settings(config)
    taus = np.asarray(tau_grid, dtype=float)
    kappas = np.asarray(kappa_grid, dtype=float)
    if taus.size == 0 or kappas.size == 0:
        raise DomainError("coefficient scan needs nonempty tau and kappa grids")

    radius, n_modes = measured.radius, measured.n_modes
    tt, kk = np.meshgrid(taus, kappas)
    values = np.zeros(tt.shape)
    valid = np.ones(tt.shape, dtype=bool)
    notes: list[str] = []
    g = measured.g.coefficients

    logger.info(
        f"Coefficient scan ({variant.value}, {test_domain.kind}): "
        f"{kappas.size} kappa x {taus.size} tau, {n_modes} modes"
    )
    for row, kappa in enumerate(kappas):
        try:
            data = assemble_dtn(Scenario(radius, kappa, test_domain.outer_object(kappa)), n_modes, resolution, config)
            reference = _reference_operator(test_domain, kappa, variant, radius, n_modes, resolution, config)
            ref_trace = _reference_trace(test_domain, kappa, variant, reference, measured, resolution, config)
        except NumericalError as e:
            valid[row, :] = False
            note = f"kappa={kappa:g}: {type(e).__name__}: {e}"
            notes.append(note)
            logger.warning(f"Masking row {note}")
            continue

        operator = DataOperator.difference(data, reference, label=f"kappa={kappa:g}")
        if operator.is_degenerate(tolerance):
            valid[row, :] = False
            notes.append(f"kappa={kappa:g}: DegenerateOperator")
            logger.warning(f"Masking row kappa={kappa:g}: operator difference is degenerate")
            continue

        series = sharp(operator.matrix, cutoff)
        p = g[:, None] - ref_trace[:, None] * taus[None, :]
        values[row] = picard_many(series, p)
        logger.debug(f"kappa={kappa:g}: cutoff {series.cutoff_index}, row max {values[row].max():.4e}")

    result = IndicatorResult(
        values=values,
        valid=valid,
        axes={"tau": tt, "kappa": kk},
        notes=notes,
        label=f"coefficients-{variant.value}-{test_domain.kind}",
    )
    arg = result.argmax
    if arg is not None:
        logger.info(f"Coefficient scan argmax at {result.at(arg)}")
    return result


def domain_scan(
    measured: CauchyData,
    family: Sequence[TestDomain],
    sigma: float,
    q: float,
    variant: ScanVariant | str = ScanVariant.TILDE,
    resolution: Resolution | None = None,
    config: dict | None = None,
) -> IndicatorResult:
    """
    I₂(Ω^(ℓ))：k = √(q/σ) 下每个族成员一次 sharp 分解。
    p = g − σ·∂_ν u₀，classical 变体中参考迹对所有成员相同。
    """
    variant = ScanVariant(variant)
    if not family:
        raise DomainError("domain scan needs at least one test domain")
    if not sigma > 0 or not q > 0:
        raise DomainError(f"sigma and q must be positive, got sigma={sigma}, q={q}")
    k = math.sqrt(q / sigma)
    cutoff, tolerance = _factorization_settings(config)
    radius, n_modes = measured.radius, measured.n_modes
    g = measured.g.coefficients

    values = np.zeros(len(family))
    valid = np.ones(len(family), dtype=bool)
    notes: list[str] = []

    shared_reference: DtnMatrix | None = None
    if variant is ScanVariant.CLASSICAL:
        shared_reference = EmptyDiskReference(k).dtn(radius, n_modes, resolution, config)

    logger.info(f"Domain scan ({variant.value}): {len(family)} members, k={k:.6g}, sigma={sigma}")
    for i, domain in enumerate(family):
        name = domain.label or f"#{i}"
        try:
            data = assemble_dtn(Scenario(radius, k, domain.outer_object(k)), n_modes, resolution, config)
            if shared_reference is not None:
                reference = shared_reference
            else:
                reference = _reference_operator(domain, k, variant, radius, n_modes, resolution, config)
            ref_trace = _reference_trace(domain, k, variant, reference, measured, resolution, config)
        except NumericalError as e:
            valid[i] = False
            notes.append(f"{name}: {type(e).__name__}: {e}")
            logger.warning(f"Masking member {name}: {e}")
            continue

        operator = DataOperator.difference(data, reference, label=name)
        if operator.is_degenerate(tolerance):
            valid[i] = False
            notes.append(f"{name}: DegenerateOperator")
            logger.warning(f"Masking member {name}: operator difference is degenerate")
            continue

        series = sharp(operator.matrix, cutoff)
        values[i] = picard_many(series, g - sigma * ref_trace)[0]
        logger.debug(f"{name}: cutoff {series.cutoff_index}, I={values[i]:.4e}")

    axes = {
        "index": np.arange(len(family)),
        "center_x": np.array([d.outer.center[0] for d in family], dtype=float),
        "center_y": np.array([d.outer.center[1] for d in family], dtype=float),
        "radius": np.array([d.outer.radius for d in family], dtype=float),
    }
    return IndicatorResult(values=values, valid=valid, axes=axes, notes=notes, label=f"domains-{variant.value}")


# ─────────────────────────────────────────────
# 凸包估计
# ─────────────────────────────────────────────

@dataclass
class HullEstimate:
    mask: np.ndarray
    accepted: list[int]
    threshold: float
    grid: SamplingGrid
    notes: list[str] = field(default_factory=list)

    @property
    def area(self) -> float:
        dx = (self.grid.x_max - self.grid.x_min) / max(self.grid.nx - 1, 1)
        dy = (self.grid.y_max - self.grid.y_min) / max(self.grid.ny - 1, 1)
        return float(np.sum(self.mask)) * dx * dy

    def contains(self, point: Sequence[float]) -> bool:
        """最近网格点是否在估计区域内"""
        ix = int(round((point[0] - self.grid.x_min) / (self.grid.x_max - self.grid.x_min) * (self.grid.nx - 1)))
        iy = int(round((point[1] - self.grid.y_min) / (self.grid.y_max - self.grid.y_min) * (self.grid.ny - 1)))
        if not (0 <= ix < self.grid.nx and 0 <= iy < self.grid.ny):
            return False
        return bool(self.mask[iy, ix])


def convex_hull_estimate(
    family: Sequence[TestDomain],
    values: IndicatorResult,
    grid: SamplingGrid,
    threshold_quantile: float = HULL_QUANTILE,
) -> HullEstimate:
    """指标高于分位数阈值的成员被接受，输出所有被接受圆盘的栅格交集"""
    if len(family) != values.values.size:
        raise DomainError(f"{len(family)} family members but {values.values.size} indicator values")
    if not 0.0 <= threshold_quantile <= 1.0:
        raise DomainError(f"threshold quantile must lie in [0, 1], got {threshold_quantile}")
    if values.n_valid < 2:
        raise NoAcceptedDomains(f"need at least two unmasked family members, got {values.n_valid}")

    flat = values.values.reshape(-1)
    ok = values.valid.reshape(-1)
    threshold = float(np.quantile(flat[ok], threshold_quantile))
    if threshold_quantile == 0.0:
        accepted = [i for i in range(len(family)) if ok[i] and flat[i] >= threshold]
    else:
        accepted = [i for i in range(len(family)) if ok[i] and flat[i] > threshold]
    if not accepted:
        raise NoAcceptedDomains(f"no family member exceeds the {threshold_quantile:g}-quantile {threshold:.4e}")

    xx, yy = grid.mesh()
    mask = np.ones(grid.shape, dtype=bool)
    for i in accepted:
        disk = family[i].outer
        mask &= np.hypot(xx - disk.center[0], yy - disk.center[1]) <= disk.radius
    logger.info(
        f"Hull estimate: {len(accepted)} of {values.n_valid} members accepted "
        f"above {threshold:.4e}, {int(mask.sum())} grid cells"
    )
    return HullEstimate(mask=mask, accepted=accepted, threshold=threshold, grid=grid)
