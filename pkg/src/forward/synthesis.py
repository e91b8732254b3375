"""
参考迹与合成 Cauchy 数据

Pipeline：真实场景 → （加密求积、加倍模态）正问题 → 截断 → CauchyData(f, g)
参考迹 ∂_ν u₀ 有三种：空圆盘 A₀f、阻抗小障碍物 A(κ², B̂)f、介质小圆盘 A(κ², B̂)f。
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Sequence

from src.geometry.curves import Circle
from src.utils.errors import DimensionMismatch, DomainError

from .boundary import BoundaryFunction, from_knot_values
from .scenario import (
    ImpedanceObstacle,
    InteriorObject,
    PenetrableDisk,
    Resolution,
    Scenario,
    scenario_hash,
)
from .solver import BoundarySolver, DtnMatrix, assemble_dtn, dtn_empty_disk

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────
# 参考对象
# ─────────────────────────────────────────────

class ReferenceKind(ABC):
    """∂_ν u₀ 的来源"""

    kappa: float

    @abstractmethod
    def dtn(self, radius: float, n_modes: int, resolution: Resolution | None, config: dict | None) -> DtnMatrix:
        ...

    @abstractmethod
    def describe(self) -> dict:
        ...


@dataclass(frozen=True)
class EmptyDiskReference(ReferenceKind):
    kappa: float

    def dtn(self, radius, n_modes, resolution=None, config=None) -> DtnMatrix:
        threshold = (config or {}).get("numerics", {}).get("eigenvalue_threshold", 1e-3)
        return dtn_empty_disk(self.kappa, radius, n_modes, threshold)

    def hat_object(self) -> None:
        return None

    def describe(self) -> dict:
        return {"kind": "empty_disk", "kappa": self.kappa}


@dataclass(frozen=True)
class ImpedanceHatReference(ReferenceKind):
    """B̂ 上阻抗条件 ∂_ν u + η̂ u = 0"""
    kappa: float
    disk: Circle
    eta: complex

    def hat_object(self) -> InteriorObject:
        return ImpedanceObstacle(self.disk, self.eta)

    def dtn(self, radius, n_modes, resolution=None, config=None) -> DtnMatrix:
        return assemble_dtn(Scenario(radius, self.kappa, self.hat_object()), n_modes, resolution, config)

    def describe(self) -> dict:
        return {
            "kind": "impedance_hat",
            "kappa": self.kappa,
            "disk": self.disk.to_dict(),
            "eta": [complex(self.eta).real, complex(self.eta).imag],
        }


@dataclass(frozen=True)
class MediumHatReference(ReferenceKind):
    kappa: float
    disk: Circle
    index: complex

    def hat_object(self) -> InteriorObject:
        return PenetrableDisk(self.disk, self.index)

    def dtn(self, radius, n_modes, resolution=None, config=None) -> DtnMatrix:
        return assemble_dtn(Scenario(radius, self.kappa, self.hat_object()), n_modes, resolution, config)

    def describe(self) -> dict:
        return {
            "kind": "medium_hat",
            "kappa": self.kappa,
            "disk": self.disk.to_dict(),
            "index": [complex(self.index).real, complex(self.index).imag],
        }


def u0_reference_trace(
    kind: ReferenceKind,
    f: BoundaryFunction,
    resolution: Resolution | None = None,
    config: dict | None = None,
) -> BoundaryFunction:
    """参考场的 Neumann 迹：A₀(κ²)f 或 A(κ², B̂)f"""
    return kind.dtn(f.radius, f.n_modes, resolution, config).apply(f)


# ─────────────────────────────────────────────
# Cauchy 数据
# ─────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class CauchyData:
    f: BoundaryFunction
    g: BoundaryFunction
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.f.n_modes != self.g.n_modes or self.f.radius != self.g.radius:
            raise DimensionMismatch("f and g must share the mode count and the radius")

    @property
    def radius(self) -> float:
        return self.f.radius

    @property
    def n_modes(self) -> int:
        return self.f.n_modes

    def scaled(self, c: complex) -> "CauchyData":
        return CauchyData(c * self.f, c * self.g, dict(self.meta))


def synthesize_cauchy_data(
    true_scenario: Scenario,
    sigma: float,
    f: BoundaryFunction,
    refinement: int = 2,
    resolution: Resolution | None = None,
    config: dict | None = None,
    knots: Sequence[float] | None = None,
) -> CauchyData:
    """g = σ ∂_ν u：在 refinement 倍求积、2N 模态下求解后截断回 N

    给出 knots 时 2N 模态的 f 由节点值重新计算；否则只能对已截断的 f 补零。
    """
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if refinement < 2:
        raise DomainError(f"refinement factor must be at least 2, got {refinement}")
    if f.radius != true_scenario.outer_radius:
        raise DimensionMismatch(f"boundary data lives on R={f.radius}, scenario has R={true_scenario.outer_radius}")

    base = resolution or Resolution.from_config(config or {})
    fine = base.refined(refinement)
    n_fine = 2 * f.n_modes
    if n_fine > fine.outer_nodes:
        raise DimensionMismatch(f"{n_fine} modes exceed {fine.outer_nodes} refined outer nodes")

    logger.info(
        f"Synthesizing Cauchy data: {true_scenario.obj.kind} object, k={true_scenario.wavenumber:.6g}, "
        f"sigma={sigma}, outer nodes {fine.outer_nodes}, modes {n_fine}"
    )
    if knots is not None:
        f_fine = from_knot_values(knots, n_fine, f.radius)
    else:
        logger.debug("No knot values given, synthesis modes above N are zero")
        f_fine = f.resized(n_fine)
    solver = BoundarySolver(true_scenario, fine, config)
    trace = solver.neumann_trace(f_fine).resized(f.n_modes)
    g = sigma * trace

    meta = {
        "scenario_hash": scenario_hash(true_scenario, fine),
        "refinement": refinement,
        "sigma": sigma,
        "wavenumber": [true_scenario.wavenumber.real, true_scenario.wavenumber.imag],
        "n_modes": f.n_modes,
        "synthesis_modes": n_fine,
        "resolution": fine.to_dict(),
    }
    return CauchyData(f=f, g=g, meta=meta)
