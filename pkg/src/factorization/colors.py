"""
指标值 → RGB

V = 2·(I − I_min)/(I_max − I_min) − 1
  V ≥ 0 → (V, 1 − V, 0)      红 ↔ 绿
  V < 0 → (0, 1 + V, −V)     绿 ↔ 蓝
被屏蔽的位置画成中性灰。
"""

from __future__ import annotations

import numpy as np

from src.utils.errors import DegenerateRange

from .indicators import IndicatorResult

MASKED_GRAY = (0.5, 0.5, 0.5)


def normalized_values(result: IndicatorResult, log_scale: bool = False) -> np.ndarray:
    """V ∈ [−1, 1]，屏蔽位置为 NaN"""
    values = result.log_values if log_scale else np.where(result.valid, result.values, np.nan)
    usable = result.valid & np.isfinite(values)
    if int(np.sum(usable)) < 2:
        raise DegenerateRange(f"need at least two finite unmasked values, got {int(np.sum(usable))}")
    lo = float(np.min(values[usable]))
    hi = float(np.max(values[usable]))
    if hi <= lo:
        raise DegenerateRange(f"indicator range is empty (I_min = I_max = {hi:.6g})")
    v = 2.0 * (values - lo) / (hi - lo) - 1.0
    return np.where(usable, np.clip(v, -1.0, 1.0), np.nan)


def rgb_map(result: IndicatorResult, log_scale: bool = False) -> np.ndarray:
    """形状为 result.shape + (3,) 的 RGB 数组，分量在 [0, 1]"""
    v = normalized_values(result, log_scale)
    rgb = np.empty(v.shape + (3,))
    rgb[...] = MASKED_GRAY
    upper = v >= 0
    lower = v < 0
    rgb[upper, 0] = v[upper]
    rgb[upper, 1] = 1.0 - v[upper]
    rgb[upper, 2] = 0.0
    rgb[lower, 0] = 0.0
    rgb[lower, 1] = 1.0 + v[lower]
    rgb[lower, 2] = -v[lower]
    return rgb
