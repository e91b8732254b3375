"""
SVG 矢量图：测量圆、真实边界、测试圆（按 RGB 着色）、节点

坐标直接用物理坐标，外层 <g> 做 y 轴翻转。
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from src.geometry.curves import Curve
from src.utils.errors import StorageError


def _num(x: float) -> str:
    return f"{float(x):.6g}"


def _color(rgb) -> str:
    r, g, b = (int(round(255 * float(np.clip(c, 0.0, 1.0)))) for c in rgb)
    return f"#{r:02x}{g:02x}{b:02x}"


@dataclass
class SvgCanvas:
    extent: float
    size: int = 600
    elements: list[str] = field(default_factory=list)

    @property
    def stroke(self) -> str:
        return _num(self.extent / 200.0)

    def circle(self, center, radius: float, color=(0.0, 0.0, 0.0), dashed: bool = False) -> "SvgCanvas":
        dash = f' stroke-dasharray="{_num(4 * float(self.stroke))}"' if dashed else ""
        self.elements.append(
            f'<circle cx="{_num(center[0])}" cy="{_num(center[1])}" r="{_num(radius)}" '
            f'fill="none" stroke="{_color(color)}" stroke-width="{self.stroke}"{dash}/>'
        )
        return self

    def curve(self, curve: Curve, color=(0.0, 0.0, 0.0), samples: int = 400) -> "SvgCanvas":
        pts = curve.polyline() if curve.is_polygon else curve.polyline(samples)
        path = " ".join(f"{_num(x)},{_num(y)}" for x, y in pts)
        self.elements.append(
            f'<polygon points="{path}" fill="none" stroke="{_color(color)}" stroke-width="{self.stroke}"/>'
        )
        return self

    def dot(self, point, color=(0.0, 0.0, 0.0), radius: float | None = None) -> "SvgCanvas":
        r = radius if radius is not None else self.extent / 80.0
        self.elements.append(
            f'<circle cx="{_num(point[0])}" cy="{_num(point[1])}" r="{_num(r)}" fill="{_color(color)}"/>'
        )
        return self

    def knots(self, radius: float, values) -> "SvgCanvas":
        """节点画在各段弧的中点：0 灰、1 黑、其它蓝"""
        values = list(values)
        n = len(values)
        for i, v in enumerate(values):
            t = 2.0 * np.pi * (i + 0.5) / n
            color = (0.6, 0.6, 0.6) if v == 0 else (0.0, 0.0, 0.0) if v == 1 else (0.0, 0.0, 1.0)
            self.dot((radius * np.cos(t), radius * np.sin(t)), color)
        return self

    def render(self) -> str:
        e = _num(self.extent)
        w = _num(2 * self.extent)
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
            f'viewBox="-{e} -{e} {w} {w}">'
        )
        body = "\n".join(f"  {el}" for el in self.elements)
        return f'{head}\n<g transform="scale(1,-1)">\n{body}\n</g>\n</svg>\n'

    def save(self, path: str) -> str:
        try:
            os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
            with open(path, "w", encoding="utf-8") as f:
                f.write(self.render())
        except OSError as e:
            raise StorageError(f"cannot write {path}: {e}") from e
        return path
