"""
热力图输出

RGB 数组约定为 (rows, cols, 3)，第 0 行对应最小的纵坐标；
写文件时上下翻转，使纵轴向上。PPM 总是写出，PNG 需要 matplotlib。
"""

from __future__ import annotations

import logging
import os

import numpy as np

from src.factorization.colors import rgb_map
from src.factorization.indicators import IndicatorResult
from src.utils.errors import StorageError

logger = logging.getLogger(__name__)


def _to_bytes(rgb: np.ndarray, scale: int) -> np.ndarray:
    img = np.clip(np.rint(np.asarray(rgb, dtype=float) * 255.0), 0, 255).astype(np.uint8)
    img = img[::-1]
    if scale > 1:
        img = np.repeat(np.repeat(img, scale, axis=0), scale, axis=1)
    return np.ascontiguousarray(img)


def write_ppm(rgb: np.ndarray, path: str, scale: int = 1) -> str:
    """二进制 P6"""
    img = _to_bytes(rgb, scale)
    h, w = img.shape[:2]
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "wb") as f:
            f.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
            f.write(img.tobytes())
    except OSError as e:
        raise StorageError(f"cannot write {path}: {e}") from e
    return path


def write_png(rgb: np.ndarray, path: str, scale: int = 1) -> str | None:
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.image as mpimg
    except ImportError:
        logger.warning(f"matplotlib is not installed; skipping {os.path.basename(path)}")
        return None
    img = _to_bytes(rgb, scale)
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        mpimg.imsave(path, img, format="png", metadata={"Software": None})
    except OSError as e:
        raise StorageError(f"cannot write {path}: {e}") from e
    return path


def write_heatmap(
    result: IndicatorResult,
    stem: str,
    formats: list[str],
    log_scale: bool = False,
    scale: int = 4,
) -> list[str]:
    """按 rgb_map 着色；返回实际写出的文件"""
    rgb = rgb_map(result, log_scale)
    written = []
    if "ppm" in formats:
        written.append(write_ppm(rgb, f"{stem}.ppm", scale))
    if "png" in formats:
        png = write_png(rgb, f"{stem}.png", scale)
        if png:
            written.append(png)
    return written
