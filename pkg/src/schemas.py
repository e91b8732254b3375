"""
运行配置的 Pydantic 校验模型

一个运行文件（YAML）分四节：
  scenario       测量圆 + 内部物体 + 系数 (σ, q) 或波数 k
  boundary_data  Dirichlet 数据 f 的节点值与模态数
  pipeline       成像 / 系数扫描 / 区域扫描的参数
  output         输出目录与格式

校验失败统一转成 ConfigError，消息带字段路径（例如 scenario.object.curve.vertices）。
"""

from __future__ import annotations

import math
from typing import Literal, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.factorization.indicators import SamplingGrid
from src.factorization.scans import (
    HULL_QUANTILE,
    INNER_MEDIUM_INDEX,
    OUTER_MEDIUM_INDEX,
    TestDomain,
    disk_grid_family,
    radial_family,
)
from src.forward.boundary import BoundaryFunction, from_knot_values
from src.forward.scenario import InteriorObject, Scenario, object_from_dict
from src.geometry.curves import Circle
from src.utils.errors import ConfigError, OneWaveError, StorageError

ComplexValue = Union[float, tuple[float, float]]


def _as_complex(value: ComplexValue) -> complex:
    if isinstance(value, (tuple, list)):
        return complex(value[0], value[1])
    return complex(value)


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ── 几何与物体 ──

class CircleSpec(_Spec):
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = Field(gt=0)

    def build(self) -> Circle:
        return Circle(center=self.center, radius=self.radius)


class CurveSpec(_Spec):
    kind: Literal["circle", "kite", "peanut", "polygon"]
    center: tuple[float, float] = (0.0, 0.0)
    radius: float | None = Field(default=None, gt=0)
    scale: float = Field(default=1.0, gt=0)
    vertices: list[tuple[float, float]] | None = None
    grading: int = Field(default=4, ge=2, le=10)

    @model_validator(mode="after")
    def _check_kind_fields(self):
        if self.kind == "circle" and self.radius is None:
            raise ValueError("circle needs a radius")
        if self.kind == "polygon" and not self.vertices:
            raise ValueError("polygon needs vertices")
        return self

    def as_dict(self) -> dict:
        data = {"kind": self.kind, "center": list(self.center), "grading": self.grading}
        if self.kind == "circle":
            data["radius"] = self.radius
        elif self.kind == "polygon":
            data["vertices"] = [list(v) for v in self.vertices or []]
        else:
            data["scale"] = self.scale
        return data


class ObjectSpec(_Spec):
    kind: Literal["empty", "dirichlet", "neumann", "impedance", "medium"] = "empty"
    curve: CurveSpec | None = None
    eta: ComplexValue = 0.0
    index: ComplexValue | None = None

    @model_validator(mode="after")
    def _check_object(self):
        if self.kind != "empty" and self.curve is None:
            raise ValueError(f"{self.kind} object needs a curve")
        if self.kind == "medium":
            if self.index is None:
                raise ValueError("medium object needs a refractive index")
            if self.curve is not None and self.curve.kind != "circle":
                raise ValueError("medium objects must be disks")
        return self

    def build(self) -> InteriorObject:
        if self.kind == "empty":
            return object_from_dict(None)
        data = {"kind": self.kind, "curve": self.curve.as_dict()}
        if self.kind == "impedance":
            data["eta"] = _as_complex(self.eta)
        if self.kind == "medium":
            data["index"] = _as_complex(self.index)
        return object_from_dict(data)


class ScenarioSpec(_Spec):
    outer_radius: float = Field(default=5.0, gt=0)
    sigma: float = Field(default=1.0, gt=0)
    q: float | None = Field(default=None, gt=0)
    wavenumber: float | None = Field(default=None, gt=0)
    object: ObjectSpec = Field(default_factory=ObjectSpec)

    @model_validator(mode="after")
    def _check_coefficients(self):
        if self.q is None and self.wavenumber is None:
            raise ValueError("give either q or wavenumber")
        if self.q is not None and self.wavenumber is not None:
            if not math.isclose(self.wavenumber, math.sqrt(self.q / self.sigma), rel_tol=1e-12):
                raise ValueError("wavenumber disagrees with sqrt(q / sigma)")
        return self

    @property
    def k(self) -> float:
        if self.wavenumber is not None:
            return self.wavenumber
        return math.sqrt(self.q / self.sigma)

    @property
    def q_value(self) -> float:
        return self.q if self.q is not None else self.sigma * self.k ** 2

    def build(self) -> Scenario:
        return Scenario(self.outer_radius, self.k, self.object.build())


# ── 边界数据 ──

class BoundaryDataSpec(_Spec):
    knots: list[float] = Field(default_factory=lambda: [1.0, 0.0, 2.0, 0.0], min_length=1)
    n_modes: int = Field(default=128, ge=2)

    @field_validator("n_modes")
    @classmethod
    def _even(cls, v: int) -> int:
        if v % 2:
            raise ValueError("mode count must be even")
        return v

    def build(self, radius: float) -> BoundaryFunction:
        return from_knot_values(self.knots, self.n_modes, radius)


# ── 管道 ──

class GridSpec(_Spec):
    x_min: float = -5.0
    x_max: float = 5.0
    y_min: float = -5.0
    y_max: float = 5.0
    nx: int = Field(default=101, ge=2)
    ny: int = Field(default=101, ge=2)

    @model_validator(mode="after")
    def _ordered(self):
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("grid bounds must be increasing")
        return self

    def build(self) -> SamplingGrid:
        return SamplingGrid(**self.model_dump())


class DomainSpec(_Spec):
    kind: Literal["impedance", "medium"] = "impedance"
    outer: CircleSpec
    inner: CircleSpec | None = None
    hat: CircleSpec | None = None
    outer_index: ComplexValue = (OUTER_MEDIUM_INDEX.real, OUTER_MEDIUM_INDEX.imag)
    inner_index: ComplexValue = (INNER_MEDIUM_INDEX.real, INNER_MEDIUM_INDEX.imag)
    label: str = ""

    def build(self) -> TestDomain:
        return TestDomain(
            outer=self.outer.build(),
            inner=self.inner.build() if self.inner else None,
            kind=self.kind,
            outer_index=_as_complex(self.outer_index),
            inner_index=_as_complex(self.inner_index),
            hat=self.hat.build() if self.hat else None,
            label=self.label,
        )


class FamilySpec(_Spec):
    """测试区域族：radial（同心圆族）、disk_grid（圆盘网格）或显式列表"""
    type: Literal["radial", "disk_grid", "explicit"] = "radial"
    kind: Literal["impedance", "medium"] = "impedance"
    center: tuple[float, float] = (0.0, 0.0)
    ells: list[int] = Field(default_factory=lambda: list(range(5, 31)))
    r: float = Field(default=1.0, gt=0)
    domains: list[DomainSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def _nonempty(self):
        if self.type == "radial" and not self.ells:
            raise ValueError("radial family needs at least one l")
        if self.type == "explicit" and not self.domains:
            raise ValueError("explicit family needs at least one domain")
        return self

    def build(self) -> list[TestDomain]:
        if self.type == "radial":
            return radial_family(self.center, self.ells, self.kind)
        if self.type == "disk_grid":
            return disk_grid_family(self.r, self.kind)
        return [d.build() for d in self.domains]


class ImagingSpec(_Spec):
    """
    成像（indicator_field）所需的人工对象。
    reference_object 为 T̃（tilde 变体的参考算子），auxiliary_disk 为 B̃；
    auxiliary_index 给出时用 Ψ̃'（实折射率 ň），否则用 Ψ̃。
    """
    grid: GridSpec = Field(default_factory=GridSpec)
    reference_object: ObjectSpec | None = None
    auxiliary_disk: CircleSpec | None = None
    auxiliary_index: float | None = None

    @field_validator("auxiliary_index")
    @classmethod
    def _not_one(cls, v: float | None) -> float | None:
        if v is not None and v == 1.0:
            raise ValueError("auxiliary refractive index must differ from 1")
        return v


class CoefficientSpec(_Spec):
    test_domain: DomainSpec
    tau_grid: list[float] = Field(min_length=1)
    kappa_grid: list[float] = Field(min_length=1)

    @field_validator("kappa_grid")
    @classmethod
    def _positive(cls, v: list[float]) -> list[float]:
        if any(x <= 0 for x in v):
            raise ValueError("kappa values must be positive")
        return v


class PolygonSpec(_Spec):
    family: FamilySpec = Field(default_factory=FamilySpec)
    sigma: float | None = Field(default=None, gt=0)
    q: float | None = Field(default=None, gt=0)
    hull_quantile: float = Field(default=HULL_QUANTILE, ge=0, le=1)
    hull_grid: GridSpec = Field(default_factory=lambda: GridSpec(x_min=-3, x_max=3, y_min=-3, y_max=3, nx=121, ny=121))


class PipelineSpec(_Spec):
    variant: Literal["classical", "tilde"] = "tilde"
    image: ImagingSpec | None = None
    coefficients: CoefficientSpec | None = None
    polygon: PolygonSpec | None = None


class OutputSpec(_Spec):
    dir: str = "output"
    formats: list[Literal["csv", "ppm", "png", "svg"]] = Field(default_factory=lambda: ["csv", "ppm", "svg"])
    log_scale: bool = False


class RunConfig(_Spec):
    name: str = "run"
    description: str = ""
    scenario: ScenarioSpec
    boundary_data: BoundaryDataSpec = Field(default_factory=BoundaryDataSpec)
    pipeline: PipelineSpec = Field(default_factory=PipelineSpec)
    output: OutputSpec = Field(default_factory=OutputSpec)

    def build_scenario(self) -> Scenario:
        try:
            return self.scenario.build()
        except OneWaveError as e:
            raise ConfigError(str(e), "scenario.object") from e

    def build_boundary_data(self) -> BoundaryFunction:
        return self.boundary_data.build(self.scenario.outer_radius)


# ── 加载 ──

def _field_path(loc: tuple) -> str:
    return ".".join(str(part) for part in loc)


def parse_run_config(data: dict) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigError(first["msg"], _field_path(first["loc"])) from e


def load_run_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except FileNotFoundError as e:
        raise StorageError(f"run file not found: {path}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"invalid YAML in {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a mapping at the top level")
    return parse_run_config(data)
