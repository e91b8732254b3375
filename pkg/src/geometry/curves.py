"""
参数化闭曲线

数据关系：Curve → (sample_curve) → BoundaryQuadrature → 层势矩阵
  - Circle   圆（测量边界 ∂B、测试区域、人工障碍物、介质圆盘）
  - Kite     风筝形障碍物
  - Peanut   花生形障碍物（非凸）
  - Polygon  凸多边形（逐边分级参数化，角点由 mesh 模块加密）

所有曲线以 t ∈ [0, 2π) 为参数、逆时针走向，外法向为 (x₂', −x₁')/|x'|。
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize_scalar

from src.utils.errors import DomainError

BOUNDARY_TOLERANCE = 1e-9

# 光滑曲线点定位用的折线采样数
_LOCATE_SAMPLES = 2048


class PointLocation(str, Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    BOUNDARY = "boundary"


def _as_point(z) -> np.ndarray:
    p = np.asarray(z, dtype=float).reshape(-1)
    if p.shape != (2,):
        raise DomainError(f"expected a 2-D point, got {z!r}")
    return p


def _winding_number(polyline: np.ndarray, z: np.ndarray) -> int:
    """闭合折线（首尾不重复）绕 z 的圈数"""
    rel = polyline - z
    nxt = np.roll(rel, -1, axis=0)
    angles = np.arctan2(
        rel[:, 0] * nxt[:, 1] - rel[:, 1] * nxt[:, 0],
        rel[:, 0] * nxt[:, 0] + rel[:, 1] * nxt[:, 1],
    )
    return int(round(float(np.sum(angles)) / (2.0 * math.pi)))


class Curve(ABC):
    """闭曲线基类"""

    kind: str = ""

    @abstractmethod
    def position(self, t) -> np.ndarray:
        """x(t)，返回形状 (len(t), 2)"""

    @abstractmethod
    def derivative(self, t) -> np.ndarray:
        """x'(t)"""

    @abstractmethod
    def second_derivative(self, t) -> np.ndarray:
        """x''(t)"""

    @abstractmethod
    def to_dict(self) -> dict:
        ...

    @property
    def is_polygon(self) -> bool:
        return False

    def polyline(self, samples: int = _LOCATE_SAMPLES) -> np.ndarray:
        t = 2.0 * math.pi * np.arange(samples) / samples
        return self.position(t)

    def max_radius(self) -> float:
        """max |x(t)|，用于检查曲线是否在 ∂B 内"""
        return float(np.max(np.linalg.norm(self.polyline(), axis=1)))

    def centroid(self) -> np.ndarray:
        """折线近似区域的面积形心"""
        p = self.polyline()
        q = np.roll(p, -1, axis=0)
        cross = p[:, 0] * q[:, 1] - q[:, 0] * p[:, 1]
        area = 0.5 * np.sum(cross)
        cx = np.sum((p[:, 0] + q[:, 0]) * cross) / (6.0 * area)
        cy = np.sum((p[:, 1] + q[:, 1]) * cross) / (6.0 * area)
        return np.array([cx, cy])

    def distance_to(self, z) -> float:
        """点到曲线的距离：折线上找最近采样点，再在相邻参数区间内细化"""
        p = _as_point(z)
        n = _LOCATE_SAMPLES
        t = 2.0 * math.pi * np.arange(n) / n
        d = np.linalg.norm(self.position(t) - p, axis=1)
        i = int(np.argmin(d))
        h = 2.0 * math.pi / n

        def sq(s: float) -> float:
            return float(np.sum((self.position(np.array([s]))[0] - p) ** 2))

        res = minimize_scalar(
            sq, bounds=(t[i] - h, t[i] + h), method="bounded",
            options={"xatol": 1e-13},
        )
        return float(min(math.sqrt(max(res.fun, 0.0)), d[i]))

    def contains_point(self, z) -> PointLocation:
        p = _as_point(z)
        if self.distance_to(p) <= BOUNDARY_TOLERANCE:
            return PointLocation.BOUNDARY
        if _winding_number(self.polyline(), p) != 0:
            return PointLocation.INSIDE
        return PointLocation.OUTSIDE


@dataclass(frozen=True)
class Circle(Curve):
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0

    kind = "circle"

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"circle radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "radius", float(self.radius))

    def position(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        c = np.asarray(self.center)
        return c + self.radius * np.stack([np.cos(t), np.sin(t)], axis=-1)

    def derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.radius * np.stack([-np.sin(t), np.cos(t)], axis=-1)

    def second_derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return -self.radius * np.stack([np.cos(t), np.sin(t)], axis=-1)

    def max_radius(self) -> float:
        return math.hypot(*self.center) + self.radius

    def centroid(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)

    def distance_to(self, z) -> float:
        p = _as_point(z)
        return abs(math.hypot(p[0] - self.center[0], p[1] - self.center[1]) - self.radius)

    def contains_point(self, z) -> PointLocation:
        p = _as_point(z)
        r = math.hypot(p[0] - self.center[0], p[1] - self.center[1])
        if abs(r - self.radius) <= BOUNDARY_TOLERANCE:
            return PointLocation.BOUNDARY
        return PointLocation.INSIDE if r < self.radius else PointLocation.OUTSIDE

    def to_dict(self) -> dict:
        return {"kind": self.kind, "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Kite(Curve):
    """x(t) = c + a·(cos t + 0.65 cos 2t − 0.65, 1.5 sin t)"""
    center: tuple[float, float] = (0.0, 0.0)
    scale: float = 1.0

    kind = "kite"

    def __post_init__(self):
        if not self.scale > 0:
            raise DomainError(f"kite scale must be positive, got {self.scale}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "scale", float(self.scale))

    def position(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        x = np.cos(t) + 0.65 * np.cos(2 * t) - 0.65
        y = 1.5 * np.sin(t)
        return np.asarray(self.center) + self.scale * np.stack([x, y], axis=-1)

    def derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.scale * np.stack([-np.sin(t) - 1.3 * np.sin(2 * t), 1.5 * np.cos(t)], axis=-1)

    def second_derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.scale * np.stack([-np.cos(t) - 2.6 * np.cos(2 * t), -1.5 * np.sin(t)], axis=-1)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "center": list(self.center), "scale": self.scale}


@dataclass(frozen=True)
class Peanut(Curve):
    """极坐标 r(t) = a·sqrt(cos²t + 0.25 sin²t)"""
    center: tuple[float, float] = (0.0, 0.0)
    scale: float = 1.0

    kind = "peanut"

    def __post_init__(self):
        if not self.scale > 0:
            raise DomainError(f"peanut scale must be positive, got {self.scale}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "scale", float(self.scale))

    def _radial(self, t: np.ndarray):
        q = np.cos(t) ** 2 + 0.25 * np.sin(t) ** 2
        dq = -0.75 * np.sin(2 * t)
        ddq = -1.5 * np.cos(2 * t)
        sq = np.sqrt(q)
        r = self.scale * sq
        dr = self.scale * dq / (2 * sq)
        ddr = self.scale * (ddq / (2 * sq) - dq ** 2 / (4 * q * sq))
        return r, dr, ddr

    def position(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        r, _, _ = self._radial(t)
        return np.asarray(self.center) + np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)

    def derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        r, dr, _ = self._radial(t)
        c, s = np.cos(t), np.sin(t)
        return np.stack([dr * c - r * s, dr * s + r * c], axis=-1)

    def second_derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        r, dr, ddr = self._radial(t)
        c, s = np.cos(t), np.sin(t)
        return np.stack(
            [ddr * c - 2 * dr * s - r * c, ddr * s + 2 * dr * c - r * s], axis=-1
        )

    def to_dict(self) -> dict:
        return {"kind": self.kind, "center": list(self.center), "scale": self.scale}


@dataclass(frozen=True)
class Polygon(Curve):
    """逆时针顶点列表；参数区间 [2πj/M, 2π(j+1)/M) 对应第 j 条边"""
    vertices: tuple[tuple[float, float], ...] = ()
    convex: bool = True
    grading: int = 4

    kind = "polygon"

    def __post_init__(self):
        verts = tuple((float(v[0]), float(v[1])) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise DomainError(f"polygon needs at least 3 vertices, got {len(verts)}")

        v = np.asarray(verts)
        edges = np.roll(v, -1, axis=0) - v
        if np.any(np.linalg.norm(edges, axis=1) == 0.0):
            raise DomainError("polygon has repeated consecutive vertices")
        if self.signed_area <= 0.0:
            raise DomainError("polygon vertices must be in counterclockwise order")
        if self.convex:
            nxt = np.roll(edges, -1, axis=0)
            turns = edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]
            if np.any(turns <= 0.0):
                raise DomainError("polygon flagged convex has a reflex or straight corner")

    @property
    def is_polygon(self) -> bool:
        return True

    @property
    def n_sides(self) -> int:
        return len(self.vertices)

    @property
    def signed_area(self) -> float:
        v = np.asarray(self.vertices)
        w = np.roll(v, -1, axis=0)
        return 0.5 * float(np.sum(v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]))

    @property
    def side_lengths(self) -> np.ndarray:
        v = np.asarray(self.vertices)
        return np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)

    @property
    def perimeter(self) -> float:
        return float(np.sum(self.side_lengths))

    def _panel(self, t: np.ndarray):
        """参数 t → (边号 j, 局部参数 σ ∈ [0, 2π))"""
        m = self.n_sides
        t = np.mod(np.asarray(t, dtype=float), 2.0 * math.pi)
        j = np.minimum((t * m / (2.0 * math.pi)).astype(int), m - 1)
        sigma = (t - 2.0 * math.pi * j / m) * m
        sigma = np.clip(sigma, 0.0, 2.0 * math.pi)
        v = np.asarray(self.vertices)
        start = v[j]
        edge = v[(j + 1) % m] - start
        return start, edge, sigma

    def position(self, t) -> np.ndarray:
        from .mesh import graded_parameter_map
        start, edge, sigma = self._panel(t)
        w = graded_parameter_map(sigma, self.grading)
        return start + edge * (w / (2.0 * math.pi))[..., None]

    def derivative(self, t) -> np.ndarray:
        from .mesh import graded_parameter_derivative
        start, edge, sigma = self._panel(t)
        dw = graded_parameter_derivative(sigma, self.grading)
        return edge * (dw * self.n_sides / (2.0 * math.pi))[..., None]

    def second_derivative(self, t) -> np.ndarray:
        from .mesh import graded_parameter_second_derivative
        start, edge, sigma = self._panel(t)
        ddw = graded_parameter_second_derivative(sigma, self.grading)
        return edge * (ddw * self.n_sides ** 2 / (2.0 * math.pi))[..., None]

    def polyline(self, samples: int = _LOCATE_SAMPLES) -> np.ndarray:
        return np.asarray(self.vertices)

    def max_radius(self) -> float:
        return float(np.max(np.linalg.norm(np.asarray(self.vertices), axis=1)))

    def distance_to(self, z) -> float:
        p = _as_point(z)
        v = np.asarray(self.vertices)
        a = v
        b = np.roll(v, -1, axis=0)
        ab = b - a
        s = np.clip(np.sum((p - a) * ab, axis=1) / np.sum(ab * ab, axis=1), 0.0, 1.0)
        closest = a + s[:, None] * ab
        return float(np.min(np.linalg.norm(closest - p, axis=1)))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "vertices": [list(v) for v in self.vertices],
            "convex": self.convex,
        }


def curve_from_dict(data: dict) -> Curve:
    """从配置字典构造曲线"""
    kind = data.get("kind", "")
    if kind == "circle":
        return Circle(center=tuple(data.get("center", (0.0, 0.0))), radius=data["radius"])
    if kind == "kite":
        return Kite(center=tuple(data.get("center", (0.0, 0.0))), scale=data.get("scale", 1.0))
    if kind == "peanut":
        return Peanut(center=tuple(data.get("center", (0.0, 0.0))), scale=data.get("scale", 1.0))
    if kind == "polygon":
        return Polygon(
            vertices=tuple(tuple(v) for v in data["vertices"]),
            convex=data.get("convex", True),
            grading=data.get("grading", 4),
        )
    raise DomainError(f"unknown curve kind: {kind!r}")
