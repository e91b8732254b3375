"""
指标函数结果与成像

数据关系：DataOperator(F) → sharp(F) → 对每个未屏蔽的采样点 z：picard(∂_νΨ(·,z))
IndicatorResult 同时服务于成像网格、(τ, κ) 网格和测试区域族。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import pandas as pd

from src.forward.solver import DtnMatrix
from src.geometry.curves import Circle
from src.numerics.linalg import max_norm

from .sharp import RELATIVE_CUTOFF, picard_many, sharp

logger = logging.getLogger(__name__)

DEGENERACY_TOLERANCE = 1e-6
GRID_CLEARANCE = 1e-2
_TRACE_BATCH = 512

TraceProvider = Callable[[np.ndarray], np.ndarray]


@dataclass
class IndicatorResult:
    """指标值 + 有效性标记；axes 里存放与 values 同形状的坐标数组"""
    values: np.ndarray
    valid: np.ndarray
    axes: dict[str, np.ndarray] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    label: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.valid = np.asarray(self.valid, dtype=bool)
        if self.values.shape != self.valid.shape:
            raise ValueError(f"values {self.values.shape} and mask {self.valid.shape} differ in shape")

    @classmethod
    def all_masked(cls, shape, note: str, axes: dict | None = None, label: str = "") -> "IndicatorResult":
        return cls(
            values=np.zeros(shape),
            valid=np.zeros(shape, dtype=bool),
            axes=axes or {},
            notes=[note],
            label=label,
        )

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @property
    def n_valid(self) -> int:
        return int(np.sum(self.valid))

    @property
    def argmax(self) -> tuple | None:
        if not self.n_valid:
            return None
        masked = np.where(self.valid, self.values, -np.inf)
        return tuple(int(i) for i in np.unravel_index(int(np.argmax(masked)), self.shape))

    @property
    def extrema(self) -> tuple[float, float] | None:
        if not self.n_valid:
            return None
        v = self.values[self.valid]
        return float(np.min(v)), float(np.max(v))

    @property
    def log_values(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            out = np.log(self.values)
        return np.where(self.valid, out, np.nan)

    def at(self, index: tuple) -> dict:
        """某个下标处的坐标"""
        return {name: float(arr[index]) for name, arr in self.axes.items()}

    def to_frame(self) -> pd.DataFrame:
        flat = {"index": np.arange(self.values.size)}
        for name, arr in self.axes.items():
            flat[name] = np.asarray(arr).reshape(-1)
        flat["value"] = self.values.reshape(-1)
        flat["log_value"] = self.log_values.reshape(-1)
        flat["masked"] = (~self.valid).reshape(-1).astype(int)
        return pd.DataFrame(flat)

    def summary(self) -> dict:
        ext = self.extrema
        arg = self.argmax
        return {
            "label": self.label,
            "shape": list(self.shape),
            "valid": self.n_valid,
            "argmax": list(arg) if arg is not None else None,
            "argmax_coordinates": self.at(arg) if arg is not None else None,
            "min": ext[0] if ext else None,
            "max": ext[1] if ext else None,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class SamplingGrid:
    """矩形采样网格，按行（y）优先展开"""
    x_min: float = -5.0
    x_max: float = 5.0
    y_min: float = -5.0
    y_max: float = 5.0
    nx: int = 101
    ny: int = 101

    @classmethod
    def from_config(cls, data: dict) -> "SamplingGrid":
        return cls(
            x_min=float(data.get("x_min", -5.0)),
            x_max=float(data.get("x_max", 5.0)),
            y_min=float(data.get("y_min", -5.0)),
            y_max=float(data.get("y_max", 5.0)),
            nx=int(data.get("nx", 101)),
            ny=int(data.get("ny", 101)),
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xs, self.ys)

    @property
    def points(self) -> np.ndarray:
        xx, yy = self.mesh()
        return np.stack([xx.reshape(-1), yy.reshape(-1)], axis=1)

    def to_dict(self) -> dict:
        return {
            "x_min": self.x_min, "x_max": self.x_max,
            "y_min": self.y_min, "y_max": self.y_max,
            "nx": self.nx, "ny": self.ny,
        }


def admissible_points(
    points: np.ndarray,
    radius: float,
    excluded: Circle | None = None,
    clearance: float = GRID_CLEARANCE,
) -> np.ndarray:
    """测试点须在 B 内，且在辅助圆盘 B̃ 外留出 clearance"""
    rho = np.hypot(points[:, 0], points[:, 1])
    ok = rho < radius - clearance
    if excluded is not None:
        d = np.hypot(points[:, 0] - excluded.center[0], points[:, 1] - excluded.center[1])
        ok &= d > excluded.radius + clearance
    return ok


@dataclass(frozen=True, eq=False)
class DataOperator:
    """F = A(k², T) − A_ref，scale 为两者中较大的 ‖·‖_max，用于判断退化"""
    matrix: np.ndarray
    scale: float
    label: str = ""

    @classmethod
    def difference(cls, data: DtnMatrix, reference: DtnMatrix, label: str = "") -> "DataOperator":
        return cls(
            matrix=data - reference,
            scale=max(max_norm(data.entries), max_norm(reference.entries)),
            label=label,
        )

    def is_degenerate(self, tolerance: float = DEGENERACY_TOLERANCE) -> bool:
        return max_norm(self.matrix) <= tolerance * self.scale


def indicator_field(
    operator: DataOperator,
    test_traces: TraceProvider,
    grid: SamplingGrid,
    radius: float,
    config: dict | None = None,
) -> IndicatorResult:
    """一次 sharp 分解，每个有效采样点一次 Picard 求值"""
    fact = (config or {}).get("factorization", {})
    cutoff = float(fact.get("cutoff", RELATIVE_CUTOFF))
    tolerance = float(fact.get("degeneracy_tolerance", DEGENERACY_TOLERANCE))
    clearance = float(fact.get("clearance", GRID_CLEARANCE))

    xx, yy = grid.mesh()
    axes = {"x": xx, "y": yy}
    if operator.is_degenerate(tolerance):
        note = (
            f"DegenerateOperator: ‖F‖_max={max_norm(operator.matrix):.3e} "
            f"is below {tolerance:g} x {operator.scale:.3e}"
        )
        logger.warning(note)
        return IndicatorResult.all_masked(grid.shape, note, axes, operator.label)

    series = sharp(operator.matrix, cutoff)
    points = grid.points
    valid = admissible_points(points, radius, getattr(test_traces, "excluded", None), clearance)
    values = np.zeros(len(points))
    idx = np.nonzero(valid)[0]
    logger.info(
        f"Imaging {operator.label or 'operator'}: {len(idx)} of {len(points)} points, "
        f"cutoff index {series.cutoff_index}/{series.size}"
    )
    for start in range(0, len(idx), _TRACE_BATCH):
        batch = idx[start:start + _TRACE_BATCH]
        values[batch] = picard_many(series, test_traces(points[batch]))

    result = IndicatorResult(
        values=values.reshape(grid.shape),
        valid=valid.reshape(grid.shape),
        axes=axes,
        label=operator.label,
    )
    if series.cutoff_index == 0:
        result.notes.append("DegenerateOperator: no eigenvalue above the cutoff")
        result.valid[:] = False
    return result
