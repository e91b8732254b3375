"""
正问题场景

数据关系：Scenario = 测量圆 ∂B（半径 R，圆心在原点）+ 波数 k + 一个内部物体
内部物体：
  - EmptyObject           无物体（u₀ 问题）
  - DirichletObstacle     u = 0
  - NeumannObstacle       ∂_ν u = 0
  - ImpedanceObstacle     ∂_ν u + η u = 0
  - PenetrableDisk        圆盘内 Δw + k² n w = 0（常数折射率）
"""

from __future__ import annotations

import cmath
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

from src.geometry.curves import Circle, Curve, curve_from_dict
from src.utils.errors import DomainError, GeometryOverlap
from src.utils.helpers import canonical_json, sha256_text

logger = logging.getLogger(__name__)

BOUNDARY_CLEARANCE = 1e-3


@dataclass(frozen=True)
class Resolution:
    """求积规模：∂B 节点数、内部曲线节点数、多边形分级指数"""
    outer_nodes: int = 512
    inner_nodes: int = 256
    grading: int = 4

    @classmethod
    def from_config(cls, config: dict) -> "Resolution":
        num = config.get("numerics", {})
        return cls(
            outer_nodes=int(num.get("outer_nodes", 512)),
            inner_nodes=int(num.get("inner_nodes", 256)),
            grading=int(num.get("grading", 4)),
        )

    def refined(self, factor: int) -> "Resolution":
        if factor < 1:
            raise DomainError(f"refinement factor must be >= 1, got {factor}")
        return Resolution(self.outer_nodes * factor, self.inner_nodes * factor, self.grading)

    def to_dict(self) -> dict:
        return {"outer_nodes": self.outer_nodes, "inner_nodes": self.inner_nodes, "grading": self.grading}


# ─────────────────────────────────────────────
# 内部物体
# ─────────────────────────────────────────────

class InteriorObject(ABC):
    kind: str = ""

    @property
    @abstractmethod
    def curve(self) -> Curve | None:
        ...

    @abstractmethod
    def to_dict(self) -> dict:
        ...

    @property
    def is_empty(self) -> bool:
        return self.curve is None


@dataclass(frozen=True)
class EmptyObject(InteriorObject):
    kind = "empty"

    @property
    def curve(self) -> None:
        return None

    def to_dict(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class DirichletObstacle(InteriorObject):
    boundary: Curve

    kind = "dirichlet"

    @property
    def curve(self) -> Curve:
        return self.boundary

    def to_dict(self) -> dict:
        return {"kind": self.kind, "curve": self.boundary.to_dict()}


@dataclass(frozen=True)
class NeumannObstacle(InteriorObject):
    boundary: Curve

    kind = "neumann"

    @property
    def curve(self) -> Curve:
        return self.boundary

    def to_dict(self) -> dict:
        return {"kind": self.kind, "curve": self.boundary.to_dict()}


@dataclass(frozen=True)
class ImpedanceObstacle(InteriorObject):
    boundary: Curve
    eta: complex = 0j

    kind = "impedance"

    def __post_init__(self):
        object.__setattr__(self, "eta", complex(self.eta))

    @property
    def curve(self) -> Curve:
        return self.boundary

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "curve": self.boundary.to_dict(),
            "eta": [self.eta.real, self.eta.imag],
        }


@dataclass(frozen=True)
class PenetrableDisk(InteriorObject):
    """常数折射率圆盘；只有 k²n 进入方程"""
    boundary: Circle
    index: complex = 1.0

    kind = "medium"

    def __post_init__(self):
        if not isinstance(self.boundary, Circle):
            raise DomainError("penetrable objects are restricted to disks")
        idx = complex(self.index)
        if idx == 1:
            raise DomainError("refractive index must differ from 1")
        object.__setattr__(self, "index", idx)

    @property
    def curve(self) -> Circle:
        return self.boundary

    def interior_wavenumber(self, k: complex) -> complex:
        """k·√n，取 Im ≥ 0 的分支"""
        k_in = complex(k) * cmath.sqrt(self.index)
        if k_in.imag < 0 or (k_in.imag == 0 and k_in.real < 0):
            k_in = -k_in
        return k_in

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "curve": self.boundary.to_dict(),
            "index": [self.index.real, self.index.imag],
        }


def _complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(value[0], value[1] if len(value) > 1 else 0.0)
    return complex(value)


def object_from_dict(data: dict | None) -> InteriorObject:
    if not data or data.get("kind", "empty") == "empty":
        return EmptyObject()
    kind = data["kind"]
    curve = curve_from_dict(data["curve"])
    if kind == "dirichlet":
        return DirichletObstacle(curve)
    if kind == "neumann":
        return NeumannObstacle(curve)
    if kind == "impedance":
        return ImpedanceObstacle(curve, _complex(data.get("eta", 0.0)))
    if kind == "medium":
        return PenetrableDisk(curve, _complex(data["index"]))
    raise DomainError(f"unknown object kind: {kind!r}")


# ─────────────────────────────────────────────
# 场景
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class Scenario:
    outer_radius: float
    wavenumber: complex
    obj: InteriorObject = field(default_factory=EmptyObject)

    def __post_init__(self):
        if not self.outer_radius > 0:
            raise DomainError(f"outer radius must be positive, got {self.outer_radius}")
        k = complex(self.wavenumber)
        if k == 0 or k.imag < 0:
            raise DomainError(f"wavenumber must be nonzero with Im k >= 0, got {k}")
        object.__setattr__(self, "outer_radius", float(self.outer_radius))
        object.__setattr__(self, "wavenumber", k)

        curve = self.obj.curve
        if curve is not None:
            gap = self.outer_radius - curve.max_radius()
            if gap < BOUNDARY_CLEARANCE:
                raise GeometryOverlap(
                    f"{curve.kind} boundary must stay at least {BOUNDARY_CLEARANCE} inside "
                    f"the measurement circle (clearance {gap:.3g})"
                )

    @property
    def is_empty(self) -> bool:
        return self.obj.is_empty

    def with_wavenumber(self, k: complex) -> "Scenario":
        return Scenario(self.outer_radius, k, self.obj)

    def with_object(self, obj: InteriorObject) -> "Scenario":
        return Scenario(self.outer_radius, self.wavenumber, obj)

    def to_dict(self) -> dict:
        return {
            "outer_radius": self.outer_radius,
            "wavenumber": [self.wavenumber.real, self.wavenumber.imag],
            "object": self.obj.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        return cls(
            outer_radius=data["outer_radius"],
            wavenumber=_complex(data["wavenumber"]),
            obj=object_from_dict(data.get("object")),
        )


def scenario_hash(scenario: Scenario, resolution: Resolution | None = None) -> str:
    payload = {"scenario": scenario.to_dict()}
    if resolution is not None:
        payload["resolution"] = resolution.to_dict()
    return sha256_text(canonical_json(payload))
